"""Brute-force partition oracles.

Partitions, Frobenius symbols (with offset), the triangle-adjoining Wright
map between offsets, overpartition counts, and the statistics counted by the
y- and z-powers of the generating functions in :mod:`blockising.identities`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator

Partition = tuple  # weakly decreasing positive parts


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n >= 0")
    return list(_partitions(n, n))


def partition_count(n: int) -> int:
    return len(_partitions(n, n))


def conjugate(p: Partition) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for part in p if part > j) for j in range(p[0]))


def distinct_sizes(p: Partition) -> int:
    """Number of different part sizes; 0 for the empty partition."""
    return len(set(p))


def distinct_size_table(n: int) -> dict[int, int]:
    """``{k: a_{n,k}}``: partitions of ``n`` with ``k`` distinct part sizes."""
    table: dict[int, int] = {}
    for p in partitions_of(n):
        k = distinct_sizes(p)
        table[k] = table.get(k, 0) + 1
    return table


# ---------------------------------------------------------------------------
# Frobenius partitions


@dataclass(frozen=True)
class FrobeniusPartition:
    """Two strictly decreasing rows of nonnegative integers.

    The offset is ``len(top) - len(bottom)``. A row shorter than the other
    is displayed dash-padded on the left, but only the real entries are
    stored, so a legitimate trailing 0 is never confused with padding.
    """

    top: tuple
    bottom: tuple

    def __post_init__(self):
        for row in (self.top, self.bottom):
            if any(a <= b for a, b in zip(row, row[1:])):
                raise ValueError(f"row {row} is not strictly decreasing")
            if row and row[-1] < 0:
                raise ValueError("entries are nonnegative")
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))

    @property
    def offset(self) -> int:
        return len(self.top) - len(self.bottom)

    @property
    def total(self) -> int:
        """``s_1 + sum(top) + sum(bottom)`` with ``s_1`` the top row length."""
        return len(self.top) + sum(self.top) + sum(self.bottom)

    def rows(self) -> tuple[list, list]:
        """Both rows dash-padded (``None``) on the left to a common length."""
        width = max(len(self.top), len(self.bottom))
        pad = lambda row: [None] * (width - len(row)) + list(row)
        return pad(self.top), pad(self.bottom)

    def __str__(self):
        fmt = lambda row: "[" + ",".join("-" if x is None else str(x) for x in row) + "]"
        a, b = self.rows()
        return f"[{fmt(a)},{fmt(b)}]"


def listed_y_stat(fp: FrobeniusPartition) -> int:
    """``1 + #{a_i > a_{i+1} + 1} + #{b_i > b_{i+1} + 1} + 1{a_last != 0} 1{b_last != 0}``.

    An empty row reads as a last entry of 0. This is the offset-0 count
    applied verbatim to every offset; see :func:`frobenius_y_stat`.
    """
    a, b = fp.top, fp.bottom
    gaps = sum(1 for x, y in zip(a, a[1:]) if x > y + 1) + sum(1 for x, y in zip(b, b[1:]) if x > y + 1)
    a_last = a[-1] if a else 0
    b_last = b[-1] if b else 0
    return 1 + gaps + (1 if a_last != 0 and b_last != 0 else 0)


def frobenius_y_stat(fp: FrobeniusPartition) -> int:
    """Number of distinct part sizes of the partition a symbol comes from.

    Equal to :func:`listed_y_stat` except when one row is empty and the other
    ends in 0. Then the Wright preimage has fewer than ``|m|`` parts, the
    trailing rows of the diagram are pure staircase, and the drop into them
    is not a change of part size, so one is subtracted. The empty partition's
    image (total ``m(m+1)/2``) gets 0 this way.
    """
    a, b = fp.top, fp.bottom
    if not a and not b:
        return 0
    k = listed_y_stat(fp)
    if (not b and a and a[-1] == 0) or (not a and b and b[-1] == 0):
        k -= 1
    return k


def to_frobenius(p: Partition) -> FrobeniusPartition:
    """Arm and leg lengths along the diagonal of the Young diagram."""
    lam = conjugate(p)
    s = sum(1 for i, part in enumerate(p) if part > i)
    return FrobeniusPartition(tuple(p[i] - i - 1 for i in range(s)),
                              tuple(lam[i] - i - 1 for i in range(s)))


def from_frobenius(fp: FrobeniusPartition) -> Partition:
    if fp.offset != 0:
        raise ValueError("only offset-0 symbols correspond to ordinary partitions")
    s = len(fp.top)
    if s == 0:
        return ()
    legs = [b + i + 1 for i, b in enumerate(fp.bottom)]  # column lengths on the diagonal
    rows = [a + i + 1 for i, a in enumerate(fp.top)]
    n_rows = legs[0]
    out = []
    for r in range(n_rows):
        if r < s:
            out.append(rows[r])
        else:
            out.append(sum(1 for c in range(s) if legs[c] > r))
    return tuple(out)


def wright(fp: FrobeniusPartition, m: int) -> FrobeniusPartition:
    """Adjoin a staircase of size ``m(m+1)/2`` to an offset-0 symbol.

    For ``m >= 0`` the partition's rows are laid on top of a triangle of
    ``m`` columns and the diagonal is re-read: row ``i`` of the new diagram
    starts at column ``min(i, m+1)`` and ends at column ``m + lambda_i``.
    Negative ``m`` is the row-swapped image of ``|m|``.
    """
    if fp.offset != 0:
        raise ValueError("wright is defined on offset-0 symbols")
    if m == 0:
        return fp
    if m < 0:
        swapped = FrobeniusPartition(fp.bottom, fp.top)
        img = wright(swapped, -m)
        return FrobeniusPartition(img.bottom, img.top)
    lam = from_frobenius(fp)
    n_rows = max(len(lam), m)
    start = lambda i: i if i <= m else m + 1
    end = lambda i: m + (lam[i - 1] if i <= len(lam) else 0)
    top = []
    i = 1
    while i <= n_rows and start(i) <= i <= end(i):
        top.append(end(i) - i)
        i += 1
    bottom = []
    j = m + 1
    while True:
        below = sum(1 for r in range(j + 1, n_rows + 1) if start(r) <= j <= end(r))
        on_diag = j <= n_rows and start(j) <= j <= end(j)
        if not on_diag:
            break
        bottom.append(below)
        j += 1
    return FrobeniusPartition(tuple(top), tuple(bottom))


def _strict_rows(length: int, max_sum: int, bound: int | None = None) -> Iterator[tuple]:
    """Strictly decreasing nonnegative tuples of a given length and bounded sum."""
    if length == 0:
        yield ()
        return
    # the smallest admissible tuple below first=f is (length-1, ..., 0)
    floor = length * (length - 1) // 2
    top = max_sum - floor + (length - 1)
    if bound is not None:
        top = min(top, bound - 1)
    for first in range(top, length - 2, -1):
        for rest in _strict_rows(length - 1, max_sum - first, first):
            yield (first,) + rest


def frobenius_partitions(total: int, offset: int) -> list[FrobeniusPartition]:
    """Direct two-row enumeration of all symbols with the given total and offset."""
    out = []
    s1 = max(offset, 0)
    while True:
        s2 = s1 - offset
        base = s1 + s1 * (s1 - 1) // 2 + s2 * (s2 - 1) // 2
        if base > total:
            break
        budget = total - s1
        for a in _strict_rows(s1, budget):
            for b in _strict_rows(s2, budget - sum(a)):
                if s1 + sum(a) + sum(b) == total:
                    out.append(FrobeniusPartition(a, b))
        s1 += 1
    return out


def fp_counts(D: int) -> dict[tuple[int, int, int], int]:
    """``{(n, m, k): |FP_{m,k}(n)|}`` for ``n <= D`` by direct enumeration."""
    counts: dict[tuple[int, int, int], int] = {}
    m = 0
    offsets = []
    while m * (m + 1) // 2 <= D:
        offsets.append(m)
        m += 1
    m = -1
    while m * (m + 1) // 2 <= D:
        offsets.append(m)
        m -= 1
    for m in offsets:
        for n in range(m * (m + 1) // 2, D + 1):
            for fp in frobenius_partitions(n, m):
                key = (n, m, frobenius_y_stat(fp))
                counts[key] = counts.get(key, 0) + 1
    return counts


def fp_counts_via_wright(D: int) -> dict[tuple[int, int, int], int]:
    """Same table as :func:`fp_counts`, built from offset-0 symbols and :func:`wright`."""
    counts: dict[tuple[int, int, int], int] = {}
    for m in range(-D - 1, D + 2):
        delta = m * (m + 1) // 2
        if delta > D:
            continue
        for n0 in range(D - delta + 1):
            for p in partitions_of(n0):
                img = wright(to_frobenius(p), m)
                key = (img.total, img.offset, frobenius_y_stat(img))
                counts[key] = counts.get(key, 0) + 1
    return counts


def fp_gen_function(D: int, check: bool = True):
    """``sum a_{n,m,k} Q^n z^m y^k`` over Frobenius partitions with ``n <= D``.

    With ``check`` the direct enumeration and the Wright-image enumeration
    are both built and must agree.
    """
    from .qseries import LaurentPoly, TruncatedSeries

    direct = fp_counts(D)
    if check and fp_counts_via_wright(D) != direct:
        raise AssertionError("Wright images disagree with direct Frobenius enumeration")
    coeffs = [dict() for _ in range(D + 1)]
    for (n, m, k), count in direct.items():
        coeffs[n][(m, k)] = coeffs[n].get((m, k), 0) + count
    return TruncatedSeries(D, [LaurentPoly(c) for c in coeffs])


def write_count_table(path_or_stream, D: int) -> None:
    counts = fp_counts(D)
    own = isinstance(path_or_stream, (str, bytes)) or hasattr(path_or_stream, "__fspath__")
    fh = open(path_or_stream, "w", newline="") if own else path_or_stream
    try:
        w = csv.writer(fh)
        w.writerow(["n", "m", "k", "count"])
        for key in sorted(counts):
            w.writerow([*key, counts[key]])
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# overpartitions and the partial-sum statistic


def overpartition_counts(n: int, m: int) -> int:
    """``sum_k m^k a_{n,k}``: the first part of each size takes one of ``m`` marks."""
    if m < 1:
        raise ValueError("m >= 1")
    return sum(m ** k * count for k, count in distinct_size_table(n).items())


def decorated_partitions(n: int, m: int) -> Iterator[tuple]:
    """Explicit decorated partitions: each distinct size is paired with a mark in ``range(m)``."""
    for p in partitions_of(n):
        sizes = sorted(set(p), reverse=True)
        for marks in product(range(m), repeat=len(sizes)):
            yield p, tuple(zip(sizes, marks))


@dataclass(frozen=True)
class PartialSumStats:
    distinct: int  # k, the number of distinct part sizes
    minimal: int  # sum of the occupied sizes
    partial_sums: int  # sum over occupied i of the number of parts >= i

    def exponent(self, n: int) -> int:
        return n * self.distinct + self.minimal - self.partial_sums


def partial_sum_stats(p: Partition) -> PartialSumStats:
    """Components of the y-exponent ``n k + sum_{occupied i} (i - #{parts >= i})``."""
    sizes = set(p)
    return PartialSumStats(
        distinct=len(sizes),
        minimal=sum(sizes),
        partial_sums=sum(sum(1 for part in p if part >= i) for i in sizes),
    )


def runs_of_consecutive(parts: Iterable[int]) -> list[list[int]]:
    """Split the distinct sizes of a partition into maximal runs differing by 1."""
    sizes = sorted(set(parts), reverse=True)
    runs: list[list[int]] = []
    for s in sizes:
        if runs and runs[-1][-1] == s + 1:
            runs[-1].append(s)
        else:
            runs.append([s])
    return runs


def profile_partition(ells: Iterable[int], alphas: Iterable[int], side: str = "left") -> Partition:
    """The partition read off one side of a run profile with geometric indices ``alphas``.

    The Q-exponent ``sum_j [l_j(l_j-1)/2 + (alpha_j + 1 + l_{j-1}) T_j]`` with
    suffix sums ``T_j`` is the size of the partition having ``alpha_1`` (left
    side) or ``alpha_1 + 1`` (right side) parts of size ``T_1``,
    ``alpha_j + 2`` parts of size ``T_j`` for ``j >= 2``, and one part of each
    size strictly between consecutive ``T``'s and below ``T_L``.
    """
    ells, alphas = list(ells), list(alphas)
    T = [sum(ells[j:]) for j in range(len(ells))] + [0]
    parts: list[int] = []
    for j, (ell, alpha) in enumerate(zip(ells, alphas)):
        reps = alpha + (2 if j else (0 if side == "left" else 1))
        parts += [T[j]] * reps
        parts += list(range(T[j] - 1, T[j + 1], -1))
    return tuple(sorted(parts, reverse=True))


__all__ = [
    "FrobeniusPartition", "PartialSumStats", "conjugate", "decorated_partitions",
    "distinct_size_table", "distinct_sizes", "fp_counts", "fp_counts_via_wright",
    "fp_gen_function", "from_frobenius", "frobenius_partitions", "frobenius_y_stat", "listed_y_stat",
    "overpartition_counts", "partial_sum_stats", "partition_count", "partitions_of",
    "profile_partition", "runs_of_consecutive", "to_frobenius", "wright", "write_count_table",
]
