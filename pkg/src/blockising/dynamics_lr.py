"""Long-range Kawasaki dynamics and the particle processes they induce.

A +1 spin at ``k`` and a -1 spin at ``l`` exchange at rate
``q^{k-l} u^X / (1 + u^X)`` where ``X`` is the energy change of the swap.
Under the stand-up map this becomes a particle hop with stack merging, or a
jump through the boundary at ``-1``. Two cut-down processes are provided:
the restricted one (only the positives bounding a run take part) and the
natural one with run-length rates ``1 / (r_i r_j)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from .core import (
    LongRangeKernel,
    ModelParams,
    ParticleConfiguration,
    SpinConfiguration,
    heat_bath,
    power,
    run_lengths,
)
from .dynamics_nn import TransitionRecord
from .observables import field_fc, rank as spin_rank
from .standup import lay_down, spin_sites


class InconsistencyError(RuntimeError):
    """Two evaluations of the same quantity disagree."""


@dataclass(frozen=True)
class HopDescriptor:
    """A particle move read on the particle side.

    ``origin`` and ``target`` are positive labels ``i`` for sites ``-i``; 0
    stands for the boundary. ``m`` is the 1-based index of the moving particle
    in its stack (from the bottom) or, for entries, the number of particles
    brought in. ``distance`` is the Ising swap distance ``|k - l|``, which is
    also the power of ``q`` in the rate; ``listed_distance`` is the formula
    that adds ``omega_{-j}`` for the occupation of the target site.
    """

    kind: str
    origin: int
    target: int
    m: int
    distance: int
    listed_distance: int
    spins: tuple


# ---------------------------------------------------------------------------
# couplings


def pair_coupling(kernel, a: int, b: int):
    """``J(a, b)``; a nearest-neighbour kernel is embedded as ``J(min(a, b))`` on bonds."""
    if isinstance(kernel, LongRangeKernel):
        return kernel.pair(a, b)
    if abs(a - b) == 1:
        return kernel.J(min(a, b))
    return 0


def interaction_range(kernel) -> int:
    return kernel.range_max if isinstance(kernel, LongRangeKernel) else 1


def swap_energy_change(spin_at, k: int, l: int, kernel):
    """``X = sum_{a != k, l} (J(a, k) - J(a, l)) sigma_a``: the energy change of the swap."""
    R = interaction_range(kernel)
    total = 0
    for a in range(min(k, l) - R, max(k, l) + R + 1):
        if a == k or a == l:
            continue
        d = pair_coupling(kernel, a, k) - pair_coupling(kernel, a, l)
        if d:
            total += d * spin_at(a)
    return total


def lr_ising_rate(sigma: SpinConfiguration, k: int, l: int, params: ModelParams):
    """Rate at which the +1 spin at ``k`` and the -1 spin at ``l`` exchange."""
    if sigma[k] != 1 or sigma[l] != -1:
        raise ValueError("need sigma_k = +1 and sigma_l = -1")
    X = swap_energy_change(sigma.__getitem__, k, l, params.kernel)
    return power(params.q, k - l) * heat_bath(params.u, X)


def lr_ising_transitions(sigma: SpinConfiguration, params: ModelParams,
                         rank_cap: int) -> list[TransitionRecord]:
    """Every +/- exchange whose target has rank at most ``rank_cap``.

    Moving a +1 spin left by ``d`` raises the rank by ``d``, so the cap bounds
    how far outside the window a swap partner can lie.
    """
    r0 = spin_rank(sigma)
    slack = rank_cap - r0
    out = []
    lo, hi = sigma.start - max(slack, 0), sigma.stop + max(slack, 0) + 1
    spins = {a: sigma[a] for a in range(lo, hi + 1)}
    for k in range(lo, hi + 1):
        if spins[k] != 1:
            continue
        for l in range(max(lo, k - slack), min(hi, sigma.stop) + 1):
            if spins[l] != -1:
                continue
            # positive moving left (l < k) raises the rank by k - l
            if l < k and k - l > slack:
                continue
            target = sigma.swapped(k, l)
            out.append(TransitionRecord(sigma, target, lr_ising_rate(sigma, k, l, params),
                                        "swap", (k, l)))
    return out


# ---------------------------------------------------------------------------
# the transferred particle process


class _Sites:
    """Positions of the +1 spins of ``lay_down(omega, n)`` and the spin lookup."""

    def __init__(self, omega: ParticleConfiguration, n: int, upto: int):
        self.top = omega.max_site
        self.S = spin_sites(omega, n, max(upto, self.top + 1))
        self.plus = set(self.S[1:])
        self.first = self.S[1]
        self.last = self.S[self.top + 1]

    def site(self, r: int) -> int:
        if r < len(self.S):
            return self.S[r]
        return self.S[-1] + r - (len(self.S) - 1)

    def spin(self, a: int) -> int:
        if a < self.first:
            return -1
        if a >= self.last:
            return 1
        return 1 if a in self.plus else -1


def _gap(w: list, r: int) -> int:
    return w[r - 1] if 1 <= r <= len(w) else 0


def _build(gaps: dict) -> ParticleConfiguration:
    return ParticleConfiguration({r: k for r, k in gaps.items() if k})


def _right_hop(w, i, m, j):
    g = {r: _gap(w, r) for r in range(1, len(w) + 1)}
    g[i] = w[i - 1] - m
    if j == i - 1:
        g[j] = _gap(w, j) + m
    else:
        g[j] = _gap(w, j) + 1 + _gap(w, j + 1)
        for t in range(j + 1, i - 1):
            g[t] = _gap(w, t + 1)
        g[i - 1] = m - 1
    return _build(g)


def _left_hop(w, i, m, j):
    g = {r: _gap(w, r) for r in range(1, max(len(w), j) + 1)}
    g[i] = m - 1
    if j == i + 1:
        g[j] = _gap(w, j) + 1 + w[i - 1] - m
    else:
        g[i + 1] = w[i - 1] - m
        for t in range(i + 1, j - 1):
            g[t + 1] = _gap(w, t)
        g[j] = _gap(w, j) + 1 + _gap(w, j - 1)
    return _build(g)


def _exit(w, i, m):
    g = {r: _gap(w, r) for r in range(1, len(w) + 1)}
    if i == 1:
        g[1] = w[0] - m
    else:
        for t in range(1, i - 1):
            g[t] = _gap(w, t + 1)
        g[i - 1] = m - 1
        g[i] = w[i - 1] - m
    return _build(g)


def _entry(w, i, p):
    g = {r: _gap(w, r) for r in range(1, max(len(w), i) + 1)}
    if i == 1:
        g[1] = _gap(w, 1) + p
    else:
        g[i] = _gap(w, i - 1) + 1 + _gap(w, i)
        for t in range(i - 2, 0, -1):
            g[t + 1] = _gap(w, t)
        g[1] = p - 1
    return _build(g)


def _span(w, a, b) -> int:
    """``sum_{s=a}^{b} (omega_{-s} + 1)``."""
    return sum(_gap(w, s) + 1 for s in range(a, b + 1))


def lr_particle_transitions(omega: ParticleConfiguration, params: ModelParams, n: int | None = None,
                            rank_cap: int | None = None, restricted: bool = False) -> list[TransitionRecord]:
    """All moves of the transferred long-range particle process within the rank cap.

    Bulk hops of the ``m``-th particle at ``-i`` to ``-j``, exits of the
    ``m``-th particle at ``-i`` through the boundary (flushing ``-1``) and
    entries to ``-i`` bringing ``p - 1`` extra particles to ``-1``. With
    ``restricted=True`` only moves between neighbouring sites (and exits or
    entries at ``-1``) are produced.
    """
    if rank_cap is None:
        raise ValueError("the long-range process needs a rank cap")
    n = params.n if n is None else n
    w = omega.as_list()
    top = len(w)
    rank = omega.rank
    slack = rank_cap - rank
    sites = _Sites(omega, n, top + max(slack, 0) + 2)
    out = []

    def emit(target, kind, i, j, m, k, l, listed):
        X = swap_energy_change(sites.spin, k, l, params.kernel)
        rate = power(params.q, k - l) * heat_bath(params.u, X)
        desc = HopDescriptor(kind, i, j, m, abs(k - l), listed, (k, l))
        out.append(TransitionRecord(omega, target, rate, kind, desc))

    for i in range(1, top + 1):
        for m in range(1, w[i - 1] + 1):
            l = sites.site(i) + m
            # hops to the right and exits lower the rank by the distance
            for j in range(i - 1, -1, -1):
                if restricted and j < i - 1:
                    break
                k = sites.site(j + 1)
                if j == 0:
                    emit(_exit(w, i, m), "boundary out", i, 0, m, k, l, _span(w, 1, i - 1) + m)
                else:
                    listed = _span(w, j + 1, i - 1) + _gap(w, j) + 1 + m - 1
                    emit(_right_hop(w, i, m, j), "hop right", i, j, m, k, l, listed)
            # hops to the left raise it
            j = i + 1
            while True:
                k = sites.site(j)
                if k - l > slack or (restricted and j > i + 1):
                    break
                listed = _span(w, i + 1, j - 1) + _gap(w, j) + 1 + w[i - 1] - m
                emit(_left_hop(w, i, m, j), "hop left", i, j, m, k, l, listed)
                j += 1
    # entries: the i-th positive swaps with the negative p sites left of S_1
    i = 1
    while True:
        k = sites.site(i)
        if k - sites.first + 1 > slack or (restricted and i > 1):
            break
        p = 1
        while True:
            l = sites.first - p
            if k - l > slack:
                break
            emit(_entry(w, i, p), "boundary in", 0, i, p, k, l, _span(w, 1, i - 1) + p)
            p += 1
        i += 1
    return out


def restricted_transitions(omega: ParticleConfiguration, params: ModelParams, n: int | None = None,
                           rank_cap: int | None = None) -> list[TransitionRecord]:
    """Stack tops splitting to a neighbouring site, plus exits and entries at ``-1``."""
    return lr_particle_transitions(omega, params, n, rank_cap, restricted=True)


# ---------------------------------------------------------------------------
# natural particle dynamics


def _shift_block(omega: ParticleConfiguration, src: int, dst: int, k: int) -> ParticleConfiguration:
    occ = omega.as_dict()
    if src:
        occ[src] -= k
    if dst:
        occ[dst] = occ.get(dst, 0) + k
    return ParticleConfiguration(occ)


def natural_transitions(omega: ParticleConfiguration, params: ModelParams,
                        rank_cap: int | None = None) -> list[TransitionRecord]:
    """Block moves of ``k`` particles with run-length rates.

    With ``r_i = max(omega_{-i}, 1)`` and ``r_0 = 1``, evaluated before the move:
    ``-i -> -i+1`` at ``q^{-k} / (r_i r_{i-1})`` (exit when ``i = 1``) and
    ``-i -> -i-1`` at ``q^{k} / (r_i r_{i+1})`` (entry when ``i = 0``).
    """
    q = params.q
    top = omega.max_site
    r = run_lengths(omega, top + 1)
    rank = omega.rank
    out = []
    for i in range(1, top + 1):
        for k in range(1, omega[i] + 1):
            out.append(TransitionRecord(omega, _shift_block(omega, i, i - 1, k),
                                        power(q, -k) / (r[i] * r[i - 1]),
                                        "boundary out" if i == 1 else "hop right", (i, i - 1, k)))
    for i in range(0, top + 1):
        avail = omega[i] if i else None
        k = 1
        while rank_cap is None or rank + k <= rank_cap:
            if avail is not None and k > avail:
                break
            out.append(TransitionRecord(omega, _shift_block(omega, i, i + 1, k),
                                        power(q, k) / (r[i] * r[i + 1]),
                                        "boundary in" if i == 0 else "hop left", (i, i + 1, k)))
            k += 1
        if i == 0 and rank_cap is None:
            raise ValueError("entries of any size are allowed; pass a rank cap")
    return out


def g_c(omega: ParticleConfiguration, n: int, r: int, c=0):
    """Contribution of the stretch between the r-th and (r+1)-th positive spins to ``f_c``.

    Negatives right of 0 in that stretch add ``2i - 2c`` each; the r-th
    positive adds ``-2(S_r - c)`` when it sits at or left of 0. ``r = 0``
    covers the -1 sea left of the first positive.
    """
    S_next = spin_sites(omega, n, r + 1)[r + 1]
    if r == 0:
        A, tail = 1, 0
    else:
        S_r = spin_sites(omega, n, r)[r]
        A = max(1, S_r + 1)
        tail = -2 * (S_r - c) if S_r <= 0 else 0
    head = (S_next - A) * (A + S_next - 1 - 2 * c) if S_next >= 2 else 0
    return head + tail


def fc_particle(omega: ParticleConfiguration, n: int, c=0):
    """``f_c((T^n)^{-1} omega)`` as the sum of :func:`g_c` over stretches."""
    total, r = 0, 0
    while True:
        total += g_c(omega, n, r, c)
        r += 1
        if r > omega.max_site + 1 and spin_sites(omega, n, r)[r] > 0:
            return total


def lambda_weight(sigma: SpinConfiguration, params: ModelParams, n: int | None = None):
    """Unnormalised ``lambda(sigma) = q^{f_c(sigma)} prod_{i >= 1} r_i(sigma)``."""
    from .standup import stand_up

    n = params.n if n is None else n
    omega = stand_up(sigma, n)
    prod = 1
    for _, k in omega.items:
        prod *= max(k, 1)
    return power(params.q, field_fc(sigma, params.c)) * prod


def kappa_exponent(omega: ParticleConfiguration, n: int, c=0):
    """``f_c`` of the laid-down configuration, checked against the stretch sum."""
    direct = field_fc(lay_down(omega, n), c)
    dual = fc_particle(omega, n, c)
    if direct != dual:
        raise InconsistencyError(f"f_c mismatch on {omega}: {direct} != {dual}")
    return direct


def kappa_weight(omega: ParticleConfiguration, params: ModelParams, n: int | None = None):
    """Unnormalised ``kappa(omega) = lambda((T^n)^{-1} omega)``."""
    n = params.n if n is None else n
    prod = 1
    for _, k in omega.items:
        prod *= max(k, 1)
    return power(params.q, kappa_exponent(omega, n, params.c)) * prod


# ---------------------------------------------------------------------------
# concentration conditions


@dataclass
class ConcentrationReport:
    condition: str
    horizon: int
    partial_sums: list
    last_terms: list
    decay_ratio: float
    verdict: str
    notes: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _inv_one_plus_exp(L: float) -> float:
    """``1 / (1 + e^L)`` without overflow."""
    if L > 0:
        e = math.exp(-L)
        return e / (1 + e)
    return 1 / (1 + math.exp(L))


def _logaddexp(a: float, b: float) -> float:
    m = max(a, b)
    return m + math.log(math.exp(a - m) + math.exp(b - m))


def _nn_term(kernel, beta, lq, c, i):
    J = lambda x: float(kernel.J(x))
    s = 1 if i <= 0 else -1
    denom = _logaddexp(beta * abs(J(i)), s * 2 * lq + beta * abs(J(i - 2)))
    return _inv_one_plus_exp(s * 2 * (i - c) * lq + beta * J(i - 1) - denom)


def _lr_term(kernel, beta, lq, c, i, M):
    pair = lambda a, b: float(pair_coupling(kernel, a, b))
    R = interaction_range(kernel)
    straddle = sum(pair(j, k) for j in range(i - R, i) for k in range(i + 1, j + R + 1))
    right = sum(pair(i, j) for j in range(i + 1, i + R + 1))
    left = sum(pair(i - 1, j) for j in range(i - 1 - R, i - 1))
    s = 1 if i <= 0 else -1
    denom = _logaddexp(beta * right, s * 2 * lq + beta * left)
    main = _inv_one_plus_exp(beta * pair(i - 1, i) + s * 2 * (i - c) * lq - denom)
    return math.exp(beta * straddle) * main


def concentration_report(params: ModelParams, horizon: int, condition: str | None = None) -> ConcentrationReport:
    """Partial sums of the summability condition for concentration on blocking configurations.

    ``partial_sums[t]`` is the sum of the terms with ``-t <= i <= t + 1``
    (nearest-neighbour form) or the analogous long-range form. The verdict
    is heuristic: it reads the size and ratio of the last terms and never
    amounts to a proof.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    kernel = params.kernel
    if condition is None:
        condition = "long-range" if isinstance(kernel, LongRangeKernel) else "nearest-neighbour"
    u, q, c = float(params.u), float(params.q), float(params.c)
    beta = -math.log(u) if u < 1 else 0.0
    lq = math.log(q)
    if condition == "nearest-neighbour":
        if isinstance(kernel, LongRangeKernel):
            raise ValueError("the nearest-neighbour condition needs a nearest-neighbour kernel")
        term = lambda i: _nn_term(kernel, beta, lq, c, i)
    elif condition == "long-range":
        term = lambda i: _lr_term(kernel, beta, lq, c, i, horizon)
    else:
        raise ValueError(f"unknown condition {condition!r}")

    partial, total, pairs = [], 0.0, []
    for t in range(horizon + 1):
        a, b = term(-t), term(t + 1)
        total += a + b
        partial.append(total)
        pairs.append(a + b)
    last = pairs[-1]
    prev = pairs[-2] if len(pairs) > 1 else float("nan")
    ratio = last / prev if prev > 0 else (0.0 if last == 0 else float("inf"))
    notes = []
    if not math.isfinite(total):
        verdict = "diverging-evidence"
    elif last <= 1e-12 * max(total, 1e-300) or (ratio < 0.9 and last < 1e-6 * max(total, 1e-300)):
        verdict = "summable-evidence"
    elif last > 1e-3 and ratio >= 0.999:
        verdict = "diverging-evidence"
        notes.append("terms are not decaying")
    else:
        verdict = "inconclusive"
    return ConcentrationReport(condition, horizon, partial, pairs[-5:], ratio, verdict, notes)
