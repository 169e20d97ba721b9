"""Detailed-balance and stationarity checks, plus a continuous-time simulator.

A *generator* is a callable ``state -> list[TransitionRecord]`` that already
applies the rank cap, so the truncated chain is closed on ``states``.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .core import ModelParams, close
from .dynamics_nn import TransitionRecord, aggregate, conditional_measure

try:
    if os.environ.get("BLOCKISING_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from ._gillespie import run_chunk as _run_chunk

    BACKEND = "cython"
except ImportError:
    from ._gillespie_py import run_chunk as _run_chunk

    BACKEND = "python"


class ClosureError(ValueError):
    """A transition leaves the truncated state set."""

    def __init__(self, escaping):
        self.escaping = escaping
        super().__init__(f"{len(escaping)} transitions leave the state set, e.g. {escaping[0]!r}")


class AbsorbingStateError(RuntimeError):
    pass


@dataclass
class BalanceReport:
    pairs_checked: int
    failures: list
    mode: str
    tolerance: float | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "failures": [
                {"source": repr(x), "target": repr(y), "lhs": str(lhs), "rhs": str(rhs)}
                for x, y, lhs, rhs in self.failures
            ],
        }


def _rate_table(states, generator) -> list[dict]:
    index = {s: i for i, s in enumerate(states)}
    table, escaping = [], []
    for s in states:
        recs = generator(s)
        for rec in recs:
            if rec.target not in index:
                escaping.append(rec)
        table.append(aggregate(recs))
    if escaping:
        raise ClosureError(escaping)
    return table


def check_detailed_balance(states: Sequence, generator: Callable, weight_fn: Callable,
                           mode: str = "exact", tol: float = 1e-12) -> BalanceReport:
    """Check ``w(x) r(x, y) == w(y) r(y, x)`` for every pair joined by a listed move.

    A move with no listed reverse counts as a failure with right-hand side 0.
    """
    states = list(states)
    table = _rate_table(states, generator)
    index = {s: i for i, s in enumerate(states)}
    weights = [weight_fn(s) for s in states]
    failures, seen = [], 0
    for a, rates in enumerate(table):
        for y, r in rates.items():
            b = index[y]
            if b == a:
                continue
            back = table[b].get(states[a], 0)
            if back and b < a:
                continue  # pair already checked from the other side
            seen += 1
            lhs, rhs = weights[a] * r, weights[b] * back
            ok = lhs == rhs if mode == "exact" else close(lhs, rhs, tol)
            if not ok:
                failures.append((states[a], y, lhs, rhs))
    return BalanceReport(seen, failures, mode, None if mode == "exact" else tol)


def stationarity_check(states: Sequence, generator: Callable, weight_fn: Callable):
    """Largest absolute entry of ``pi G`` for the normalised weights ``pi``."""
    states = list(states)
    table = _rate_table(states, generator)
    index = {s: i for i, s in enumerate(states)}
    pi = conditional_measure(states, weight_fn)
    flow = [0 * pi[states[0]]] * len(states)
    for a, rates in enumerate(table):
        mass = pi[states[a]]
        for y, r in rates.items():
            b = index[y]
            if b == a:
                continue
            flow[b] = flow[b] + mass * r
            flow[a] = flow[a] - mass * r
    return max(abs(f) for f in flow)


# ---------------------------------------------------------------------------
# compressed chains and simulation


@dataclass
class TruncatedChain:
    """Float CSR form of a truncated generator."""

    states: list
    indptr: np.ndarray
    targets: np.ndarray
    cumrates: np.ndarray
    totals: np.ndarray

    @classmethod
    def build(cls, states: Sequence, generator: Callable) -> "TruncatedChain":
        states = list(states)
        table = _rate_table(states, generator)
        index = {s: i for i, s in enumerate(states)}
        indptr = [0]
        targets, cum, totals = [], [], []
        for a, rates in enumerate(table):
            acc = 0.0
            for y, r in rates.items():
                if index[y] == a or not r:
                    continue
                acc += float(r)
                targets.append(index[y])
                cum.append(acc)
            indptr.append(len(targets))
            totals.append(acc)
        return cls(states, np.asarray(indptr, dtype=np.int64), np.asarray(targets, dtype=np.int64),
                   np.asarray(cum, dtype=np.float64), np.asarray(totals, dtype=np.float64))

    def __len__(self):
        return len(self.states)


@dataclass
class TrajectoryStats:
    seed: int
    events: int
    total_time: float
    occupation: np.ndarray
    empirical: np.ndarray
    tv_distance: float | None
    final_state: int
    backend: str = BACKEND
    trajectory: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"seed": self.seed, "events": self.events, "total_time": self.total_time,
                "tv_distance": self.tv_distance, "final_state": self.final_state,
                "backend": self.backend, "states": len(self.occupation)}


def total_variation(p: np.ndarray, r: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(r, dtype=float)).sum())


CHUNK = 1 << 17


def simulate(chain: TruncatedChain, initial: int, seed: int, events: int | None = None,
             t_max: float | None = None, exact: Sequence | None = None,
             record: bool = False) -> TrajectoryStats:
    """Gillespie trajectory on ``chain`` from state index ``initial``.

    Each event draws two uniforms from a PCG64 stream seeded with ``seed``;
    the compiled and pure-Python backends consume the same stream and so
    produce identical trajectories. The run stops after ``events`` jumps or
    once the clock passes ``t_max`` (the last holding time is clipped).
    """
    if events is None and t_max is None:
        raise ValueError("give an event cap or a time horizon")
    rng = np.random.Generator(np.random.PCG64(seed))
    occupation = np.zeros(len(chain), dtype=np.float64)
    state, clock, done = int(initial), 0.0, 0
    horizon = float("inf") if t_max is None else float(t_max)
    budget = float("inf") if events is None else int(events)
    trajectory = [(0.0, state)] if record else []
    while done < budget and clock < horizon:
        n = int(min(CHUNK, budget - done))
        uniforms = rng.random(2 * n)
        if chain.totals[state] <= 0:
            raise AbsorbingStateError(f"state {state} has total rate 0")
        times = np.empty(n if record else 0, dtype=np.float64)
        visited = np.empty(n if record else 0, dtype=np.int64)
        state, clock, k, absorbed = _run_chunk(chain.indptr, chain.targets, chain.cumrates, chain.totals,
                                               occupation, uniforms, state, clock, horizon, n,
                                               times, visited)
        if absorbed:
            raise AbsorbingStateError(f"state {state} has total rate 0")
        if record:
            trajectory.extend(zip(times[:k].tolist(), visited[:k].tolist()))
        done += k
        if k < n:
            break
    total = float(occupation.sum())
    if total > 0:
        empirical = occupation / total
    else:
        empirical = np.zeros(len(chain))
        empirical[int(initial)] = 1.0
    tv = None if exact is None else total_variation(empirical, exact)
    return TrajectoryStats(seed, done, total, occupation, empirical, tv, state, BACKEND, trajectory)


def write_trajectory(stream, stats: TrajectoryStats) -> None:
    writer = csv.writer(stream)
    writer.writerow(["time", "state_id"])
    for t, s in stats.trajectory:
        writer.writerow([repr(t), s])


# ---------------------------------------------------------------------------
# named models


MODELS = ("ising", "standup", "longrange", "longrange-particle", "restricted", "natural")


@dataclass
class TruncatedModel:
    name: str
    states: list
    generator: Callable
    weight: Callable
    initial: Any

    def exact_measure(self) -> list:
        pi = conditional_measure(self.states, self.weight)
        return [pi[s] for s in self.states]


def truncated_model(name: str, params: ModelParams, n: int, rank_cap: int) -> TruncatedModel:
    """States of rank at most ``rank_cap`` in sector ``n`` with a generator and a weight.

    ``ising`` and ``longrange`` live on spin configurations; the other models
    on particle configurations. Weights are unnormalised and drop the
    sector-constant factor ``z^N``.
    """
    from . import dynamics_lr as lr
    from . import dynamics_nn as nn
    from .core import step_profile
    from .observables import enumerate_spin_sector, particle_configurations, particle_weight, weight

    if name in ("ising", "longrange"):
        states = enumerate_spin_sector(n, rank_cap)
        w = lambda s: weight(s, params, include_z=False)
        if name == "ising":
            gen = lambda s: nn.ising_transitions(s, params, rank_cap)
        else:
            gen = lambda s: lr.lr_ising_transitions(s, params, rank_cap)
        return TruncatedModel(name, states, gen, w, step_profile(n))

    states = list(particle_configurations(rank_cap))
    empty = states[0]
    if name == "standup":
        gen = lambda s: nn.standup_transitions(s, params, n, rank_cap)
        w = lambda s: particle_weight(s, params, n)
    elif name == "longrange-particle":
        gen = lambda s: lr.lr_particle_transitions(s, params, n, rank_cap)
        w = lambda s: particle_weight(s, params, n)
    elif name == "restricted":
        gen = lambda s: lr.restricted_transitions(s, params, n, rank_cap)
        w = lambda s: particle_weight(s, params, n)
    elif name == "natural":
        gen = lambda s: lr.natural_transitions(s, params, rank_cap)
        w = lambda s: lr.kappa_weight(s, params.with_(c=0), n)
    else:
        raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    return TruncatedModel(name, states, gen, w, empty)


def report_json(obj) -> str:
    return json.dumps(obj, indent=2, default=str)
