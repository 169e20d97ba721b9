"""Energies, the external-field functional, the conserved quantity and weights.

The weight of a blocking configuration is ``u^H q^{f_c}``. Writing
``Q = q^2`` and ``z = q^{-2c}`` it factors as ``u^H Q^{f_0/2} z^N``; the
integer ``f_0/2`` is the grading used by every truncation in the package.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator

from .core import (
    LongRangeKernel,
    ModelParams,
    ParticleConfiguration,
    SpinConfiguration,
    power,
)


def hamiltonian(sigma: SpinConfiguration, kernel):
    """``H_J(sigma)`` for a nearest-neighbour or finite-range kernel."""
    if isinstance(kernel, LongRangeKernel):
        return _long_range_energy(sigma, kernel)
    return sum(kernel.J(i) for i in sigma.disagreements())


def _long_range_energy(sigma: SpinConfiguration, kernel: LongRangeKernel):
    # only pairs within range_max of the window can disagree
    R = kernel.range_max
    lo, hi = sigma.start - R, sigma.stop + R
    spins = [sigma[i] for i in range(lo, hi + 1)]
    total = 0
    for d, v in kernel.profile:
        for a in range(len(spins) - d):
            if spins[a] != spins[a + d]:
                total += v
    return total


def disagreement_count(sigma: SpinConfiguration) -> int:
    return len(sigma.disagreements())


def f0_half(sigma: SpinConfiguration) -> int:
    """``f_0(sigma)/2``: sum of ``i`` over -1 spins at ``i >= 1`` plus ``|i|`` over +1 spins at ``i <= 0``."""
    total = 0
    for i in range(min(sigma.start, 1), max(sigma.stop, 0) + 1):
        s = sigma[i]
        if i >= 1 and s == -1:
            total += i
        elif i <= 0 and s == 1:
            total -= i
    return total


def conserved_N(sigma: SpinConfiguration) -> int:
    """Number of -1 spins right of 0 minus number of +1 spins left of 1."""
    total = 0
    for i in range(min(sigma.start, 1), max(sigma.stop, 0) + 1):
        s = sigma[i]
        if i >= 1 and s == -1:
            total += 1
        elif i <= 0 and s == 1:
            total -= 1
    return total


def field_fc(sigma: SpinConfiguration, c=0):
    """``f_c(sigma) = f_0(sigma) - 2 c N(sigma)``."""
    return 2 * f0_half(sigma) - 2 * c * conserved_N(sigma)


def shift(sigma: SpinConfiguration, k: int) -> SpinConfiguration:
    """``(tau^k sigma)_i = sigma_{i+k}``."""
    return SpinConfiguration(sigma.start - k, sigma.spins)


def shifted_hamiltonian_correction(sigma: SpinConfiguration, kernel, n: int):
    """``H^{(n)}(sigma) = sum_i (J(i+n) - J(i)) 1{sigma_i != sigma_{i+1}}``."""
    return sum(kernel.J(i + n) - kernel.J(i) for i in sigma.disagreements())


def weight_exponents(sigma: SpinConfiguration, kernel) -> tuple:
    """``(H, f_0/2, N)`` so that the weight is ``u^H Q^{f_0/2} z^N``."""
    return hamiltonian(sigma, kernel), f0_half(sigma), conserved_N(sigma)


def weight(sigma: SpinConfiguration, params: ModelParams, include_z: bool = True):
    """Unnormalised weight ``u^{H} q^{f_c}``.

    With ``include_z=False`` the factor ``z^N = q^{-2cN}`` is dropped. Inside a
    sector it is a constant, so sector-conditional laws are unchanged, and
    exact mode then works for any rational ``c``.
    """
    H, half, N = weight_exponents(sigma, params.kernel)
    w = power(params.u, H) * power(params.q, 2 * half)
    if include_z and N:
        w = w * power(params.q, -2 * params.c * N)
    return w


def particle_energy(omega: ParticleConfiguration, kernel, n: int):
    """Energy of the laid-down configuration read off the stood-up one.

    Each occupied site ``-j`` contributes ``J(S_j) + J(S_{j+1} - 1)`` and the
    edge of the -1 sea contributes ``J(S_1 - 1)``.
    """
    from .standup import lay_down, spin_sites

    if isinstance(kernel, LongRangeKernel):
        return hamiltonian(lay_down(omega, n), kernel)
    S = spin_sites(omega, n)
    total = kernel.J(S[1] - 1)
    for j, k in omega.items:
        total += kernel.J(S[j]) + kernel.J(S[j + 1] - 1)
    return total


def particle_weight(omega: ParticleConfiguration, params: ModelParams, n: int | None = None):
    """Numerator of the stationary law of the stood-up process in sector ``n``."""
    n = params.n if n is None else n
    return power(params.u, particle_energy(omega, params.kernel, n)) * power(params.q, 2 * omega.rank)


# ---------------------------------------------------------------------------
# truncated enumeration


def particle_configurations(D: int) -> Iterator[ParticleConfiguration]:
    """All ``omega`` with ``sum_i i omega_{-i} <= D``, by increasing rank."""
    from .combinatorics import partitions_of

    for size in range(D + 1):
        for p in partitions_of(size):
            yield ParticleConfiguration.from_partition(p)


def enumerate_spin_sector(n: int, D: int, absolute: bool = False) -> list[SpinConfiguration]:
    """Configurations of sector ``n`` whose rank is at most ``D``.

    The rank of ``sigma`` is ``f_0(sigma)/2 - n(n+1)/2``, the size of the
    partition it stands up to. With ``absolute=True`` the cap applies to
    ``f_0/2`` itself, which is what a Q-degree truncation of a generating
    function needs.
    """
    from .standup import lay_down

    if absolute:
        D -= n * (n + 1) // 2
    if D < 0:
        return []
    return [lay_down(w, n) for w in particle_configurations(D)]


def rank(sigma: SpinConfiguration) -> int:
    n = conserved_N(sigma)
    return f0_half(sigma) - n * (n + 1) // 2


def enumeration_records(n: int, D: int, kernel) -> Iterable[dict]:
    from .standup import stand_up

    for sigma in enumerate_spin_sector(n, D):
        omega = stand_up(sigma, n)
        yield {
            "sector": n,
            "rank": omega.rank,
            "spins": sigma.to_string(),
            "omega": {str(r): k for r, k in omega.items},
            "weight_Q_exponent": f0_half(sigma),
            "weight_u_exponent": _jsonable(hamiltonian(sigma, kernel)),
        }


def _jsonable(x):
    if isinstance(x, int):
        return x
    try:
        if x.denominator == 1:
            return int(x.numerator)
    except AttributeError:
        pass
    return str(x)


def write_enumeration(stream, n: int, D: int, kernel) -> int:
    count = 0
    for rec in enumeration_records(n, D, kernel):
        stream.write(json.dumps(rec) + "\n")
        count += 1
    return count
