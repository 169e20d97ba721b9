"""Run-profile expansions of the partition functions and their verification.

A run profile ``(l_1..l_L; m_1..m_R)`` records the lengths of the runs of
+1 spins placed left of the origin and of -1 spins placed right of it.
Every series here is a :class:`~blockising.qseries.TruncatedSeries` in ``Q``
with Laurent coefficients in ``(z, y)``. Series that need ``e^{-beta}``
itself (odd powers of ``y^{1/2}``) store the exponent of ``u = y^{1/2}`` in
the second slot instead; such functions say so.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .core import ConstantKernel, LinearKernel, NearestNeighbourKernel
from .qseries import (
    LaurentPoly,
    TruncatedSeries,
    blocking_partition_product,
    inverse_blocking_product,
    jtp_product,
    theta,
)


@dataclass(frozen=True)
class RunProfile:
    """Run lengths left (``ells``) and right (``ms``) of the origin.

    The sentinels ``l_0 = -1`` and ``m_0 = 0`` are implied.
    """

    ells: tuple = ()
    ms: tuple = ()

    @property
    def L(self) -> int:
        return len(self.ells)

    @property
    def R(self) -> int:
        return len(self.ms)


LEFT_SENTINEL = -1
RIGHT_SENTINEL = 0


def suffix_sums(parts) -> list[int]:
    """``T_j = parts_j + ... + parts_last`` for ``j = 1..len`` (index 0 is ``T_1``)."""
    out, acc = [], 0
    for p in reversed(parts):
        acc += p
        out.append(acc)
    return out[::-1]


def side_cost(parts, sentinel: int) -> int:
    """Minimal Q-degree of one side: ``sum_j [p_j(p_j-1)/2 + (p_{j-1}+1) T_j]``."""
    T = suffix_sums(parts)
    prev = sentinel
    total = 0
    for p, t in zip(parts, T):
        total += p * (p - 1) // 2 + (prev + 1) * t
        prev = p
    return total


def min_side_cost(length: int, sentinel: int) -> int:
    """Cheapest cost over compositions of the given length: all parts equal to 1."""
    return side_cost((1,) * length, sentinel)


def side_profiles(budget: int, sentinel: int) -> list[tuple[tuple, int]]:
    """All compositions whose side cost is at most ``budget``, with that cost.

    Parts are chosen from the last one backwards. Choosing ``p`` in front of
    a suffix summing to ``T`` adds ``p(p-1)/2 + (p+1) T``; with ``k`` parts
    still to place the cheapest completion adds ``2kT + k(k-1)`` plus the
    sentinel term ``(sentinel+1) * (T + k)``.
    """
    out: list[tuple[tuple, int]] = [((), 0)]
    s1 = sentinel + 1

    def extend(suffix: tuple, T: int, cost: int):
        # suffix is nonempty; try closing it here
        total = cost + s1 * T
        if total <= budget:
            out.append((suffix, total))
        # otherwise (or additionally) prepend another part
        if cost + 2 * T + s1 * (T + 1) > budget:
            return
        p = 1
        while True:
            add = p * (p - 1) // 2 + (p + 1) * T
            if cost + add + s1 * (T + p) > budget:
                break
            extend((p,) + suffix, T + p, cost + add)
            p += 1

    p = 1
    while True:
        # last part p alone: internal cost p(p-1)/2
        c = p * (p - 1) // 2
        if c + s1 * p > budget:
            break
        extend((p,), p, c)
        p += 1
    return out


def max_runs(D: int) -> tuple[int, int]:
    """Largest ``L`` with ``L(L-1) <= D`` and ``R`` with ``R^2 <= D``."""
    L = 0
    while (L + 1) * L <= D:
        L += 1
    R = 0
    while (R + 1) ** 2 <= D:
        R += 1
    return L, R


# ---------------------------------------------------------------------------
# Z(Q, z, y) for constant couplings


def _geometric_poly(bases: tuple, budget: int) -> list[int]:
    """Coefficients of ``prod 1/(1 - Q^b)`` up to ``Q^budget``."""
    return list(_geometric_poly_cached(tuple(sorted(bases)), budget))


@lru_cache(maxsize=None)
def _geometric_poly_cached(bases: tuple, budget: int) -> tuple:
    g = [0] * (budget + 1)
    g[0] = 1
    for b in bases:
        for d in range(b, budget + 1):
            g[d] += g[d - b]
    return tuple(g)


FAULTS = ("drop_yinv_bracket", "left_sentinel_zero", "geometric_shift")


def Z_J1(D: int, fault: str | None = None) -> TruncatedSeries:
    """``Z(Q, z, y)``: the run-profile sum with the trailing bracket
    ``(1 - y^{-1}) Q^{sum l + sum m} + y^{-1}``.

    ``fault`` injects a deliberate error (one of :data:`FAULTS`) so the
    verification driver can be shown to catch it.
    """
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    left_sentinel = 0 if fault == "left_sentinel_zero" else LEFT_SENTINEL
    lefts = side_profiles(D, left_sentinel)
    rights = side_profiles(D, RIGHT_SENTINEL)
    rights.sort(key=lambda x: x[1])
    acc: dict = {(0, 0, 0): 1}
    for ells, El in lefts:
        for ms, Em in rights:
            E = El + Em
            if E > D:
                break
            L, R = len(ells), len(ms)
            if L == 0 and R == 0:
                continue
            bases = suffix_sums(ells) + suffix_sums(ms)
            if fault == "geometric_shift":
                bases = [b + 1 for b in bases]
            g = _geometric_poly(tuple(bases), D - E)
            zexp = sum(ms) - sum(ells)
            S = sum(ells) + sum(ms)
            y = L + R
            for d, v in enumerate(g):
                if not v:
                    continue
                if fault != "drop_yinv_bracket":
                    key = (E + d, zexp, y - 1)
                    acc[key] = acc.get(key, 0) + v
                if E + S + d <= D:
                    k1 = (E + S + d, zexp, y)
                    k2 = (E + S + d, zexp, y - 1)
                    acc[k1] = acc.get(k1, 0) + v
                    acc[k2] = acc.get(k2, 0) - v
    return TruncatedSeries.from_terms(D, acc)


def y_to_u(series: TruncatedSeries, u_shift: int = 0) -> TruncatedSeries:
    """Rewrite ``y^k`` as ``u^{2k}`` and multiply by ``u^{u_shift}``."""
    return series.map_coefficients(lambda c: c.map_exponents(lambda z, y: (z, 2 * y + u_shift)))


def ising_partition_function(D: int) -> TruncatedSeries:
    """``Z_{beta,q,c}`` for ``J = 1`` in the variables ``(Q, z, u)``.

    The run expansion carries a global ``y^{1/2} = u`` in front of
    ``Z(Q, z, y)``; the second coefficient slot holds the power of ``u``.
    """
    return y_to_u(Z_J1(D), 1)


def blocking_product_u(D: int) -> TruncatedSeries:
    """``u prod (1 + (u^2-1)Q^i)(1 + Q^i z)(1 + Q^{i-1} z^{-1})`` in ``(Q, z, u)``."""
    return y_to_u(blocking_partition_product(D), 1)


def brute_force_partition_function(D: int, kernel=None) -> TruncatedSeries:
    """``sum_sigma u^{H(sigma)} Q^{f_0/2} z^{N}`` over configurations with ``f_0/2 <= D``.

    Coefficients are keyed by ``(N, H)``; ``H`` must be an integer.
    """
    from .observables import enumerate_spin_sector, f0_half, hamiltonian

    kernel = ConstantKernel() if kernel is None else kernel
    acc: dict = {}
    n = 0
    sectors = []
    while n * (n + 1) // 2 <= D:
        sectors.append(n)
        if n > 0:
            sectors.append(-n - 1)
        n += 1
    sectors.append(-1)
    for n in sorted(set(sectors)):
        for sigma in enumerate_spin_sector(n, D, absolute=True):
            H = hamiltonian(sigma, kernel)
            if H != int(H):
                raise ValueError("brute-force series needs integer energies")
            key = (f0_half(sigma), n, int(H))
            acc[key] = acc.get(key, 0) + 1
    return TruncatedSeries.from_terms(D, acc)


# ---------------------------------------------------------------------------
# run sums


def _J(kernel: NearestNeighbourKernel, i: int) -> int:
    v = kernel.J(i)
    if v != int(v):
        raise ValueError("run sums are tracked in integer powers of u; J must be integer valued")
    return int(v)


def direct_A(kernel, n: int, ms, D: int, strict: bool = False) -> TruncatedSeries:
    """Index-tuple sum over ``s_1 >= 1`` (``> 1`` if ``strict``), gaps ``s_{i+1} - s_i >= m_i + 1``."""
    acc: dict = {}
    R = len(ms)

    def rec(j: int, lo: int, deg: int, uexp: int):
        if j == R:
            key = (deg, 0, uexp)
            acc[key] = acc.get(key, 0) + 1
            return
        m = ms[j]
        # later parts start beyond s + m; the cheapest completion costs at least this much
        tail = sum(ms[j + 1:])
        s = lo
        while deg + s * m + (s + m + 1) * tail <= D:
            rec(j + 1, s + m + 1, deg + s * m, uexp + _J(kernel, s + n - 1) + _J(kernel, s + m + n - 1))
            s += 1

    rec(0, 2 if strict else 1, 0, 0)
    return TruncatedSeries.from_terms(D, acc)


def direct_B(kernel, n: int, ells, D: int, strict: bool = False) -> TruncatedSeries:
    """Index-tuple sum over ``r_1 <= 0`` (``< 0`` if ``strict``), gaps ``r_{i+1} - r_i <= -l_i - 1``."""
    acc: dict = {}
    L = len(ells)

    def rec(j: int, hi: int, deg: int, uexp: int):
        if j == L:
            key = (deg, 0, uexp)
            acc[key] = acc.get(key, 0) + 1
            return
        ell = ells[j]
        tail = sum(ells[j + 1:])
        r = hi
        while deg - r * ell + (-(r - ell - 1)) * tail <= D:
            rec(j + 1, r - ell - 1, deg - r * ell, uexp + _J(kernel, r + n) + _J(kernel, r - ell + n))
            r -= 1

    rec(0, -1 if strict else 0, 0, 0)
    return TruncatedSeries.from_terms(D, acc)


def _closed_product(D: int, parts, sentinel: int, uexp_first: int, weights) -> TruncatedSeries:
    """``u^{uexp_first} prod_{j=0}^{k-1} (u^{w_j} Q^{T_{j+1}})^{p_j + 1} / (1 - u^{w_j} Q^{T_{j+1}})``.

    ``p_0`` is the sentinel and ``w_j`` comes from ``weights(j)``.
    """
    T = suffix_sums(parts)
    prev = [sentinel] + list(parts[:-1])
    qdeg = sum((p + 1) * t for p, t in zip(prev, T))
    uexp = uexp_first + sum((p + 1) * weights(j) for j, p in enumerate(prev))
    s = TruncatedSeries.monomial(D, qdeg, 0, uexp) if qdeg <= D else TruncatedSeries.zero(D)
    for j, t in enumerate(T):
        s = s.divide_one_minus(t, 0, weights(j))
    return s


def closed_run_sums(kernel, n: int, profile: RunProfile, D: int) -> dict[str, TruncatedSeries]:
    """Closed forms of ``A_R, B_L, a_R, b_L`` for constant and linear couplings (keys ``(0, u)``)."""
    ells, ms = profile.ells, profile.ms
    L, R = len(ells), len(ms)
    if isinstance(kernel, ConstantKernel):
        v = int(kernel.value)
        B = _closed_product(D, ells, LEFT_SENTINEL, 2 * v * L, lambda j: 0)
        A = _closed_product(D, ms, RIGHT_SENTINEL, 2 * v * R, lambda j: 0)
        b = B.shifted(sum(ells)) if sum(ells) <= D else TruncatedSeries.zero(D)
        a = A.shifted(sum(ms)) if sum(ms) <= D else TruncatedSeries.zero(D)
    elif isinstance(kernel, LinearKernel):
        B = _closed_product(D, ells, LEFT_SENTINEL, 2 * L * n - sum(ells), lambda j: -2 * (L - j))
        A = _closed_product(D, ms, RIGHT_SENTINEL, 2 * R * (n - 1) + sum(ms), lambda j: 2 * (R - j))
        b = B.shifted(sum(ells), 0, -2 * L) if sum(ells) <= D else TruncatedSeries.zero(D)
        a = A.shifted(sum(ms), 0, 2 * R) if sum(ms) <= D else TruncatedSeries.zero(D)
    else:
        raise TypeError("closed forms exist for constant and linear couplings only")
    return {"A": A, "B": B, "a": a, "b": b}


def run_sums(kernel, n: int, profile: RunProfile, D: int, check: bool = True) -> dict[str, TruncatedSeries]:
    """``A_R^{(n)}, B_L^{(n)}, a_R^{(n)}, b_L^{(n)}`` as series in ``(Q, u)``.

    Direct index-tuple summation is always performed. For constant and
    linear couplings the closed forms are built too and, with ``check``,
    must agree with the direct sums.
    """
    direct = {
        "A": direct_A(kernel, n, profile.ms, D),
        "a": direct_A(kernel, n, profile.ms, D, strict=True),
        "B": direct_B(kernel, n, profile.ells, D),
        "b": direct_B(kernel, n, profile.ells, D, strict=True),
    }
    if check and isinstance(kernel, (ConstantKernel, LinearKernel)):
        closed = closed_run_sums(kernel, n, profile, D)
        for key in direct:
            if direct[key] != closed[key]:
                raise AssertionError(f"closed form of {key} disagrees with direct sum: "
                                     f"{direct[key].first_mismatch(closed[key])}")
    return direct


def _run_sums_fast(kernel, n: int, profile: RunProfile, D: int) -> dict[str, TruncatedSeries]:
    if isinstance(kernel, (ConstantKernel, LinearKernel)):
        return closed_run_sums(kernel, n, profile, D)
    return run_sums(kernel, n, profile, D, check=False)


# ---------------------------------------------------------------------------
# sector masses Z * mu(N = n)


def _balanced_profiles(D: int, diff: int, need_both: bool) -> Iterator[tuple[tuple, tuple, int]]:
    """Profiles with ``sum m - sum l = diff`` and minimal degree ``<= D``."""
    lefts = side_profiles(D, LEFT_SENTINEL)
    rights = side_profiles(D, RIGHT_SENTINEL)
    by_sum: dict[int, list] = {}
    for ms, Em in rights:
        by_sum.setdefault(sum(ms), []).append((ms, Em))
    for ells, El in lefts:
        for ms, Em in by_sum.get(sum(ells) + diff, []):
            if El + Em > D:
                continue
            if not ells and not ms:
                continue
            if need_both and (not ells or not ms):
                continue
            yield ells, ms, El + Em


def sector_mass_shift(kernel, n: int, D: int) -> TruncatedSeries:
    """``Z mu(1{N=0} e^{-beta H^{(n)}})`` in ``(Q, z, u)``, from the sector-0 run expansion."""
    Jn = _J(kernel, n)
    total = TruncatedSeries.monomial(D, 0, 0, Jn)
    for ells, ms, _ in _balanced_profiles(D, 0, need_both=True):
        base = sum(l * (l - 1) // 2 for l in ells) + sum(m * (m - 1) // 2 for m in ms)
        if base > D:
            continue
        rs = _run_sums_fast(kernel, n, RunProfile(ells, ms), D - base)
        AB = rs["A"] * rs["B"]
        ab = rs["a"] * rs["b"]
        term = AB.shifted(0, 0, -Jn) + ab.shifted(0, 0, Jn) - ab.shifted(0, 0, -Jn)
        total = total + _lift(term, D, base)
    return total


def sector_mass_direct(kernel, n: int, D: int) -> TruncatedSeries:
    """``Z mu(N = n)`` in ``(Q, z, u)`` from runs around the ``sigma^0`` step.

    Profiles with ``L = 0`` or ``R = 0`` are included whenever
    ``sum m - sum l = n`` allows them (empty run sums equal 1), and the bare
    step ``sigma^0`` only contributes to sector 0.
    """
    J0 = _J(kernel, 0)
    total = TruncatedSeries.monomial(D, 0, 0, J0) if n == 0 else TruncatedSeries.zero(D)
    for ells, ms, _ in _balanced_profiles(D, n, need_both=False):
        base = sum(l * (l - 1) // 2 for l in ells) + sum(m * (m - 1) // 2 for m in ms)
        if base > D:
            continue
        rs = _run_sums_fast(kernel, 0, RunProfile(ells, ms), D - base)
        AB = rs["A"] * rs["B"]
        ab = rs["a"] * rs["b"]
        term = AB.shifted(0, 0, -J0) + ab.shifted(0, 0, J0) - ab.shifted(0, 0, -J0)
        total = total + _lift(term, D, base, zexp=n)
    return total


def _lift(term: TruncatedSeries, D: int, qdeg: int, zexp: int = 0) -> TruncatedSeries:
    out = TruncatedSeries.zero(D)
    for d in range(term.D + 1):
        if d + qdeg <= D and term.coeffs[d]:
            out.coeffs[d + qdeg] = term.coeffs[d].shifted(zexp, 0)
    return out


def brute_force_sector(kernel, n: int, D: int) -> TruncatedSeries:
    """``sum_{sigma in B_n, f_0/2 <= D} u^H Q^{f_0/2} z^n``."""
    from .observables import enumerate_spin_sector, f0_half, hamiltonian

    acc: dict = {}
    for sigma in enumerate_spin_sector(n, D, absolute=True):
        key = (f0_half(sigma), n, int(hamiltonian(sigma, kernel)))
        acc[key] = acc.get(key, 0) + 1
    return TruncatedSeries.from_terms(D, acc)


@dataclass
class SectorMassReport:
    n: int
    D: int
    direct: TruncatedSeries
    shift_based: TruncatedSeries
    brute_force: TruncatedSeries
    shift_relation: bool
    matches_brute_force: bool
    mismatch: dict | None = None


def sector_mass(kernel, n: int, D: int) -> SectorMassReport:
    """Both run expansions of ``Z mu(N = n)`` and the enumeration oracle, compared."""
    direct = sector_mass_direct(kernel, n, D)
    offset = n * (n + 1) // 2
    shift = sector_mass_shift(kernel, n, max(D - offset, 0)) if offset <= D else TruncatedSeries.zero(0)
    lifted = _lift(shift, D, offset, zexp=n) if offset <= D else TruncatedSeries.zero(D)
    brute = brute_force_sector(kernel, n, D)
    rel = direct == lifted
    ok = direct == brute
    mismatch = None if ok else direct.first_mismatch(brute)
    if ok and not rel:
        mismatch = direct.first_mismatch(lifted)
    return SectorMassReport(n, D, direct, lifted, brute, rel, ok, mismatch)


# ---------------------------------------------------------------------------
# sector series for J(i) = i


def _y_geometric(D: int, base_q: int, base_y: int, init: dict) -> dict:
    """Multiply ``init`` (``(qdeg, y) -> c``) by ``1/(1 - y^{base_y} Q^{base_q})``."""
    # degrees are processed in increasing order so each new term feeds the next
    by_deg: dict[int, dict] = {}
    for (d, y), v in init.items():
        by_deg.setdefault(d, {})[y] = by_deg.get(d, {}).get(y, 0) + v
    for d in range(base_q, D + 1):
        src = by_deg.get(d - base_q)
        if not src:
            continue
        dst = by_deg.setdefault(d, {})
        for y, v in src.items():
            dst[y + base_y] = dst.get(y + base_y, 0) + v
    return {(d, y): v for d, ys in by_deg.items() for y, v in ys.items() if v}


def _ji_side(parts, sentinel: int, D: int, sign: int) -> tuple[int, int, list[tuple[int, int]]]:
    """Leading (Q, y) exponents and geometric factors of one side of a sector-series term.

    Factor ``j`` is ``Q^{p_j(p_j-1)/2} (y^{w_j} Q^{T_j})^{p_{j-1}+1} / (1 - y^{w_j} Q^{T_j})``
    with ``w_j = sign * (k - j + 1)``.
    """
    k = len(parts)
    T = suffix_sums(parts)
    prev = [sentinel] + list(parts[:-1])
    qdeg = 0
    yexp = 0
    geo = []
    for j in range(1, k + 1):
        p, t, pp = parts[j - 1], T[j - 1], prev[j - 1]
        w = sign * (k - j + 1)
        qdeg += p * (p - 1) // 2 + (pp + 1) * t
        yexp += (pp + 1) * w
        geo.append((t, w))
    return qdeg, yexp, geo


def Z_Ji(n: int, D: int) -> TruncatedSeries:
    """``Z_n(Q, y)`` as the balanced run-profile sum (z-exponent always 0)."""
    acc: dict = {(0, 0): 1}
    for ells, ms, E in _balanced_profiles(D, 0, need_both=True):
        L, R = len(ells), len(ms)
        ql, yl, gl = _ji_side(ells, LEFT_SENTINEL, D, -1)
        qm, ym, gm = _ji_side(ms, RIGHT_SENTINEL, D, +1)
        q0 = ql + qm
        y0 = yl + ym + n * L + (n - 1) * R
        term = {(q0, y0): 1}
        for t, w in gl + gm:
            term = _y_geometric(D, t, w, term)
        S = sum(ells) + sum(ms)
        for (d, y), v in term.items():
            # bracket: y^{-n} + (1 - y^{-n}) y^{R-L} Q^{S}
            _bump(acc, d, y - n, v, D)
            _bump(acc, d + S, y + R - L, v, D)
            _bump(acc, d + S, y + R - L - n, -v, D)
    return TruncatedSeries.from_terms(D, {(d, 0, y): v for (d, y), v in acc.items()})


def _bump(acc: dict, d: int, y: int, v, D: int) -> None:
    if d <= D:
        acc[(d, y)] = acc.get((d, y), 0) + v


def Z_Ji_rhs(n: int, D: int) -> TruncatedSeries:
    """``sum_omega prod_i y^{1{omega_i > 0}(n + i - sum_{j >= i} omega_j)} Q^{i omega_i}``."""
    from .combinatorics import partial_sum_stats, partitions_of

    acc: dict = {}
    for size in range(D + 1):
        for p in partitions_of(size):
            key = (size, 0, partial_sum_stats(p).exponent(n))
            acc[key] = acc.get(key, 0) + 1
    return TruncatedSeries.from_terms(D, acc)


# ---------------------------------------------------------------------------
# verification driver


@dataclass
class VerifyReport:
    identity: str
    degree: int
    status: str
    first_mismatch: dict | None = None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        out = {"identity": self.identity, "degree": self.degree, "status": self.status}
        if self.first_mismatch is not None:
            out["first_mismatch"] = self.first_mismatch
        if self.details:
            out["details"] = self.details
        out["seconds"] = round(self.seconds, 3)
        return out


IDENTITIES = ("thm1", "cor1_2", "thm2", "jtp", "lemma4", "remark2_1")


def _compare(name: str, D: int, left: TruncatedSeries, right: TruncatedSeries, **details) -> VerifyReport:
    mm = left.first_mismatch(right)
    return VerifyReport(name, D, "PASS" if mm is None else "FAIL", mm, details)


def displayed_beta_zero_product(D: int) -> TruncatedSeries:
    """The beta = 0 product with the sign convention as originally displayed, in ``(Q, z)``:
    ``prod (1 + Q^i z^{-1})(1 + Q^{i-1} z^{-1})``."""
    from .qseries import one_plus

    s = TruncatedSeries.one(D)
    for i in range(1, D + 2):
        if i <= D:
            s = s * one_plus(D, i, {(-1, 0): 1})
        s = s * one_plus(D, i - 1, {(-1, 0): 1})
    return s


def asep_product(D: int) -> TruncatedSeries:
    """The beta = 0 specialisation of the product form: ``prod (1 + Q^i z)(1 + Q^{i-1} z^{-1})``."""
    from .qseries import one_plus

    s = TruncatedSeries.one(D)
    for i in range(1, D + 2):
        if i <= D:
            s = s * one_plus(D, i, {(1, 0): 1})
        s = s * one_plus(D, i - 1, {(-1, 0): 1})
    return s


def _at_u_one(series: TruncatedSeries) -> TruncatedSeries:
    return series.map_coefficients(lambda c: c.map_exponents(lambda z, u: (z, 0)))


def verify(identity: str, D: int, n: int | None = None, fault: str | None = None) -> VerifyReport:
    """Coefficientwise exact check of a named identity up to Q-degree ``D``."""
    t0 = time.perf_counter()
    if identity == "thm1":
        lhs = Z_J1(D, fault) * inverse_blocking_product(D)
        report = _compare("thm1", D, lhs, theta(D))
    elif identity == "jtp":
        report = _compare("jtp", D, theta(D), jtp_product(D))
    elif identity == "cor1_2":
        Z = Z_J1(D, fault)
        product = blocking_partition_product(D)
        brute = brute_force_partition_function(D)
        checks = {
            "Z_equals_product": Z.first_mismatch(product),
            "product_equals_brute_force": blocking_product_u(D).first_mismatch(brute),
            "run_expansion_equals_brute_force": y_to_u(Z, 1).first_mismatch(brute),
        }
        bad = {k: v for k, v in checks.items() if v is not None}
        first = next(iter(bad.values()), None)
        report = VerifyReport("cor1_2", D, "FAIL" if bad else "PASS", first,
                              {k: ("ok" if v is None else v) for k, v in checks.items()})
    elif identity == "thm2":
        ns = [n] if n is not None else list(range(-2, 4))
        details = {}
        first = None
        for k in ns:
            mm = Z_Ji(k, D).first_mismatch(Z_Ji_rhs(k, D))
            details[f"n={k}"] = "ok" if mm is None else mm
            if mm is not None and first is None:
                first = dict(mm, n=k)
        report = VerifyReport("thm2", D, "FAIL" if first else "PASS", first, details)
    elif identity == "lemma4":
        ns = [n] if n is not None else list(range(-2, 4))
        details = {}
        first = None
        for kernel in (ConstantKernel(), LinearKernel()):
            for k in ns:
                rep = sector_mass(kernel, k, D)
                ok = rep.shift_relation and rep.matches_brute_force
                details[f"{type(kernel).__name__}:n={k}"] = "ok" if ok else (rep.mismatch or "shift relation")
                if not ok and first is None:
                    first = {"kernel": type(kernel).__name__, "n": k, **(rep.mismatch or {})}
        total = TruncatedSeries.zero(D)
        for k in range(-D - 1, D + 1):
            if k * (k + 1) // 2 <= D:
                total = total + sector_mass_direct(ConstantKernel(), k, D)
        mm = total.first_mismatch(ising_partition_function(D))
        details["sum_over_sectors"] = "ok" if mm is None else mm
        if mm is not None and first is None:
            first = mm
        report = VerifyReport("lemma4", D, "FAIL" if first else "PASS", first, details)
    elif identity == "remark2_1":
        brute = _at_u_one(brute_force_partition_function(D))
        product_form = asep_product(D)
        displayed = displayed_beta_zero_product(D)
        mm_product = brute.first_mismatch(product_form)
        mm_displayed = brute.first_mismatch(displayed)
        details = {
            "product_form_matches_brute_force": mm_product is None,
            "displayed_form_matches_brute_force": mm_displayed is None,
            "displayed_first_mismatch": mm_displayed,
            "note": "beta=0 brute force vs prod(1+Q^i z)(1+Q^(i-1) z^-1) and vs "
                    "prod(1+Q^i z^-1)(1+Q^(i-1) z^-1); z = q^(-2c)",
        }
        report = VerifyReport("remark2_1", D, "PASS" if mm_product is None else "FAIL", mm_product, details)
    else:
        raise ValueError(f"unknown identity {identity!r}; expected one of {IDENTITIES}")
    report.seconds = time.perf_counter() - t0
    return report
