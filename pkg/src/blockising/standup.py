"""The standing-up bijection between a spin sector and particle configurations.

Gaps between consecutive +1 spins become particle counts: the number of -1
spins between the r-th and (r+1)-th positive spin is the occupation of site
``-r``. Inverting uses ``S_r = n + r - sum_{i >= r} omega_{-i}``.
"""

from __future__ import annotations

from itertools import islice

from .core import ParticleConfiguration, SpinConfiguration
from .observables import conserved_N


class SectorMismatch(ValueError):
    pass


def stand_up(sigma: SpinConfiguration, n: int) -> ParticleConfiguration:
    if conserved_N(sigma) != n:
        raise SectorMismatch(f"configuration lies in sector {conserved_N(sigma)}, not {n}")
    # every gap that can be nonempty closes by the first +1 right of the window
    count = len(sigma.spins) - len(sigma.negative_sites_in_window()) + 1
    S = list(islice(sigma.positive_sites(), count + 1))
    return ParticleConfiguration({r: S[r] - S[r - 1] - 1 for r in range(1, len(S))})


def spin_sites(omega: ParticleConfiguration, n: int, upto: int | None = None) -> list[int]:
    """``[S_0, S_1, ..., S_upto]``; index 0 is a placeholder equal to ``S_1 - 1``.

    ``upto`` defaults to one past the last occupied site.
    """
    upto = omega.max_site + 1 if upto is None else upto
    occ = omega.as_list(max(upto, omega.max_site))
    suffix = [0] * (len(occ) + 2)
    for r in range(len(occ), 0, -1):
        suffix[r] = suffix[r + 1] + occ[r - 1]
    out = [0] * (upto + 1)
    for r in range(1, upto + 1):
        out[r] = n + r - (suffix[r] if r <= len(occ) else 0)
    out[0] = out[1] - 1 if upto >= 1 else n
    return out


def spin_site(omega: ParticleConfiguration, n: int, r: int) -> int:
    """Position ``S_r^{(n)}(omega)`` of the r-th +1 spin."""
    if r < 1:
        raise ValueError("r >= 1")
    return n + r - sum(k for site, k in omega.items if site >= r)


def lay_down(omega: ParticleConfiguration, n: int) -> SpinConfiguration:
    S = spin_sites(omega, n)[1:]
    first, last = S[0], S[-1]
    window = [-1] * (last - first + 1)
    for s in S:
        window[s - first] = 1
    return SpinConfiguration(first, tuple(window))
