"""Nearest-neighbour Kawasaki rates and the rates of the stood-up process.

Rates use ``u = e^{-beta}``: ``1/2 (1 - tanh(beta x/2)) = u^x / (1 + u^x)`` and
``1/2 (1 + tanh(beta x/2)) = 1 / (1 + u^x)``, so integer couplings give
rational rates in exact mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .core import ModelParams, ParticleConfiguration, SpinConfiguration, heat_bath, power
from .observables import rank as spin_rank
from .standup import spin_sites


@dataclass(frozen=True)
class TransitionRecord:
    source: Any
    target: Any
    rate: Any
    move: str
    detail: tuple = ()


def tanh_minus(u, x):
    """``1/2 (1 - tanh(beta x / 2))``."""
    return heat_bath(u, x)


def tanh_plus(u, x):
    """``1/2 (1 + tanh(beta x / 2))``."""
    return heat_bath(u, -x)


# ---------------------------------------------------------------------------
# spin dynamics


def classify_swap(sigma: SpinConfiguration, i: int) -> str:
    """``increasing``, ``neutral`` or ``decreasing`` in the number of disagreements."""
    a, b, c, d = sigma[i - 1], sigma[i], sigma[i + 1], sigma[i + 2]
    before = (a != b) + (b != c) + (c != d)
    after = (a != c) + (c != b) + (b != d)
    return {2: "increasing", 0: "neutral", -2: "decreasing"}[after - before]


def energy_change(sigma: SpinConfiguration, i: int, kernel) -> Any:
    """``H(sigma') - H(sigma)`` when the spins at ``i`` and ``i+1`` are exchanged."""
    a, b, c, d = sigma[i - 1], sigma[i], sigma[i + 1], sigma[i + 2]
    return (kernel.J(i - 1) * ((a != c) - (a != b))
            + kernel.J(i + 1) * ((b != d) - (c != d)))


def ising_rate(sigma: SpinConfiguration, i: int, params: ModelParams):
    """Rate of exchanging the spins at ``i`` and ``i+1``.

    Agreeing spins swap at rate 0. Otherwise the rate is
    ``1/2 (1 - tanh(beta dH / 2)) q^{+-1}`` where ``dH`` is the energy change,
    times ``q`` when the +1 spin moves left and ``q^{-1}`` when it moves right.
    In the disagreement-changing cases ``dH = +-(J(i-1) + J(i+1))``; in the
    neutral ones ``dH = +-(J(i+1) - J(i-1))`` with the sign fixed by which
    spin the pair moves against.
    """
    if sigma[i] == sigma[i + 1]:
        return 0 * params.u
    dH = energy_change(sigma, i, params.kernel)
    qfac = params.q if sigma[i + 1] == 1 else 1 / params.q
    return heat_bath(params.u, dH) * qfac


def listed_rate(sigma: SpinConfiguration, i: int, params: ModelParams):
    """The six-case rate list read literally, one formula per case and direction.

    It agrees with :func:`ising_rate` except on neutral moves whose outer
    neighbours are both +1 (``+-++ <-> ++-+``), where the literal formula uses
    the opposite sign of ``J(i+1) - J(i-1)``. Kept for comparison only.
    """
    if sigma[i] == sigma[i + 1]:
        return 0 * params.u
    J, u, q = params.kernel.J, params.u, params.q
    left = sigma[i + 1] == 1
    kind = classify_swap(sigma, i)
    if kind == "increasing":
        base = tanh_minus(u, J(i - 1) + J(i + 1))
    elif kind == "decreasing":
        base = tanh_plus(u, J(i - 1) + J(i + 1))
    elif left:
        base = tanh_plus(u, J(i + 1) - J(i - 1))
    else:
        base = tanh_minus(u, J(i + 1) - J(i - 1))
    return base * (q if left else 1 / q)


def ising_transitions(sigma: SpinConfiguration, params: ModelParams,
                      rank_cap: int | None = None) -> list[TransitionRecord]:
    """One record per adjacent disagreeing pair; targets above ``rank_cap`` are dropped."""
    out = []
    r0 = spin_rank(sigma) if rank_cap is not None else None
    for i in sigma.disagreements():
        left = sigma[i + 1] == 1
        if rank_cap is not None and r0 + (1 if left else -1) > rank_cap:
            continue
        target = sigma.swapped(i, i + 1)
        out.append(TransitionRecord(sigma, target, ising_rate(sigma, i, params),
                                    f"swap {classify_swap(sigma, i)} {'left' if left else 'right'}",
                                    (i, i + 1)))
    return out


# ---------------------------------------------------------------------------
# stood-up process


def _moved(omega: ParticleConfiguration, src: int | None, dst: int | None, k: int = 1) -> ParticleConfiguration:
    occ = omega.as_dict()
    if src is not None:
        occ[src] -= k
    if dst is not None:
        occ[dst] = occ.get(dst, 0) + k
    return ParticleConfiguration(occ)


def standup_transitions(omega: ParticleConfiguration, params: ModelParams, n: int | None = None,
                        rank_cap: int | None = None) -> list[TransitionRecord]:
    """Single-particle hops of the stood-up process with the tabulated rates.

    Bulk hops cross the bond ``(-r, -r+1)`` for ``r >= 2``; boundary moves
    take a particle from ``-1`` out of the system or bring one in.
    """
    n = params.n if n is None else n
    J, u, q = params.kernel.J, params.u, params.q
    top = omega.max_site
    S = spin_sites(omega, n, top + 2)
    w = omega.as_list(top + 2)
    occ = lambda r: w[r - 1] if 1 <= r <= len(w) else 0
    rank = omega.rank
    out = []

    def emit(target, rate, move, detail, step):
        if rank_cap is None or rank + step <= rank_cap:
            out.append(TransitionRecord(omega, target, rate, move, detail))

    # right jumps: a particle at -r moves to -r+1 (the r-th +1 spin moves right)
    for r in range(2, top + 1):
        here, ahead = occ(r), occ(r - 1)
        if here == 0:
            continue
        s = S[r]
        if here == 1 and ahead == 0:
            rate = tanh_plus(u, J(s + 1) - J(s - 1))
        elif here == 1:
            rate = tanh_plus(u, J(s - 1) + J(s + 1))
        elif ahead == 0:
            rate = tanh_minus(u, J(s - 1) + J(s + 1))
        else:
            rate = tanh_minus(u, J(s + 1) - J(s - 1))
        emit(_moved(omega, r, r - 1), rate / q, "hop right", (-r, -r + 1), -1)

    # left jumps: a particle at -r+1 moves to -r (the r-th +1 spin moves left)
    for r in range(2, top + 2):
        src, here = occ(r - 1), occ(r)
        if src == 0:
            continue
        s = S[r]
        if src == 1 and here == 0:
            rate = tanh_minus(u, J(s) - J(S[r - 1]))
        elif here == 0:
            rate = tanh_minus(u, J(s - 2) + J(s))
        elif src == 1:
            rate = tanh_plus(u, J(s - 2) + J(s))
        else:
            rate = tanh_plus(u, J(s) - J(s - 2))
        emit(_moved(omega, r - 1, r), rate * q, "hop left", (-r + 1, -r), +1)

    # boundary at -1
    s = S[1]
    if occ(1) >= 1:
        if occ(1) == 1:
            rate = tanh_plus(u, J(s - 1) + J(s + 1))
        else:
            rate = tanh_minus(u, J(s + 1) - J(s - 1))
        emit(_moved(omega, 1, None), rate / q, "boundary out", (-1,), -1)
    if occ(1) == 0:
        rate = tanh_minus(u, J(s - 2) + J(s))
    else:
        rate = tanh_plus(u, J(s) - J(s - 2))
    emit(_moved(omega, None, 1), rate * q, "boundary in", (-1,), +1)
    return out


# ---------------------------------------------------------------------------


def conditional_measure(states: Sequence, weight_fn: Callable[[Any], Any]) -> dict:
    """Weights of ``states`` normalised to sum to one (exact in rational mode)."""
    if not states:
        raise ValueError("conditional measure of an empty state set")
    weights = [weight_fn(s) for s in states]
    total = sum(weights)
    return {s: w / total for s, w in zip(states, weights)}


def aggregate(records: Iterable[TransitionRecord]) -> dict:
    """Sum rates by target."""
    out: dict = {}
    for rec in records:
        out[rec.target] = out.get(rec.target, 0) + rec.rate
    return out
