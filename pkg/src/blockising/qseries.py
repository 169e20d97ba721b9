"""Truncated power series in Q over Laurent polynomials in (z, y).

Coefficients are exact: Python ints where possible, promoted to
:class:`fractions.Fraction` only when a rational enters. A series carries its
truncation degree ``D`` and never reports coefficients above it.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from typing import Iterable, Iterator, Mapping


class LaurentPoly:
    """Sparse Laurent polynomial keyed by ``(z_exp, y_exp)``; zero terms are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def monomial(cls, z: int = 0, y: int = 0, coef=1) -> "LaurentPoly":
        return cls({(z, y): coef})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({(0, 0): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for (z1, y1), a in self.terms.items():
            for (z2, y2), b in other.terms.items():
                key = (z1 + z2, y1 + y2)
                out[key] = out.get(key, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shifted(self, z: int = 0, y: int = 0, coef=1) -> "LaurentPoly":
        return LaurentPoly({(a + z, b + y): v * coef for (a, b), v in self.terms.items()})

    def items(self):
        return sorted(self.terms.items())

    def max_abs_exponent(self) -> int:
        return max((max(abs(a), abs(b)) for a, b in self.terms), default=0)

    def evaluate_y(self, y) -> "LaurentPoly":
        """Substitute a number for y, leaving a polynomial in z (y-exponent 0)."""
        out: dict = {}
        for (a, b), v in self.terms.items():
            val = v * (Fraction(y) ** b if b < 0 else y ** b)
            out[(a, 0)] = out.get((a, 0), 0) + val
        return LaurentPoly(out)

    def map_exponents(self, f) -> "LaurentPoly":
        out: dict = {}
        for key, v in self.terms.items():
            k2 = f(*key)
            out[k2] = out.get(k2, 0) + v
        return LaurentPoly(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), v in self.items():
            mon = "".join(s for s in (
                "" if a == 0 else ("z" if a == 1 else f"z^{a}"),
                "" if b == 0 else ("y" if b == 1 else f"y^{b}")) if s)
            parts.append(f"{v}{'*' + mon if mon else ''}")
        return " + ".join(parts)


class FormalInvertibilityError(ValueError):
    pass


class TruncatedSeries:
    """``sum_{d <= D} c_d Q^d`` with :class:`LaurentPoly` coefficients.

    ``exp_cap`` optionally bounds ``|z|`` and ``|y|`` exponents; exceeding it
    raises ``ValueError`` so an enumeration bug cannot silently grow
    coefficients without bound.
    """

    __slots__ = ("D", "coeffs", "exp_cap")

    def __init__(self, D: int, coeffs: Iterable[LaurentPoly] | None = None, exp_cap: int | None = None):
        if D < 0:
            raise ValueError("degree cap must be >= 0")
        self.D = D
        cs = list(coeffs) if coeffs is not None else []
        cs = cs[: D + 1] + [LaurentPoly() for _ in range(D + 1 - len(cs))]
        self.coeffs = cs
        self.exp_cap = exp_cap
        if exp_cap is not None:
            self.check_exponent_cap(exp_cap)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, D: int) -> "TruncatedSeries":
        return cls(D)

    @classmethod
    def one(cls, D: int) -> "TruncatedSeries":
        return cls.monomial(D, 0)

    @classmethod
    def monomial(cls, D: int, qdeg: int, z: int = 0, y: int = 0, coef=1) -> "TruncatedSeries":
        s = cls(D)
        if 0 <= qdeg <= D and coef != 0:
            s.coeffs[qdeg] = LaurentPoly.monomial(z, y, coef)
        return s

    @classmethod
    def from_terms(cls, D: int, terms: Mapping[tuple, object]) -> "TruncatedSeries":
        """From a mapping ``(qdeg, z, y) -> coefficient``; degrees above ``D`` are dropped."""
        buckets: list[dict] = [dict() for _ in range(D + 1)]
        for (d, z, y), v in terms.items():
            if 0 <= d <= D:
                buckets[d][(z, y)] = buckets[d].get((z, y), 0) + v
        return cls(D, [LaurentPoly(b) for b in buckets])

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.D, [LaurentPoly(c.terms) for c in self.coeffs])

    # inspection ---------------------------------------------------------
    def __getitem__(self, d: int) -> LaurentPoly:
        if not 0 <= d <= self.D:
            raise IndexError(f"degree {d} is outside the truncation 0..{self.D}")
        return self.coeffs[d]

    def coefficient(self, d: int, z: int = 0, y: int = 0):
        return self[d].terms.get((z, y), 0)

    def terms(self) -> Iterator[tuple]:
        """Yield ``(qdeg, z, y, coefficient)`` in sorted order."""
        for d, c in enumerate(self.coeffs):
            for (z, y), v in c.items():
                yield d, z, y, v

    def check_exponent_cap(self, cap: int) -> None:
        for d, c in enumerate(self.coeffs):
            if c.max_abs_exponent() > cap:
                raise ValueError(f"exponent beyond cap {cap} at Q^{d}")

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        D = min(self.D, other.D)
        return all(self.coeffs[d] == other.coeffs[d] for d in range(D + 1))

    def first_mismatch(self, other: "TruncatedSeries") -> dict | None:
        """Lowest-degree coefficient where the two series differ, or ``None``."""
        D = min(self.D, other.D)
        for d in range(D + 1):
            a, b = self.coeffs[d].terms, other.coeffs[d].terms
            if a != b:
                for key in sorted(set(a) | set(b)):
                    if a.get(key, 0) != b.get(key, 0):
                        return {"q_degree": d, "z_exp": key[0], "y_exp": key[1],
                                "left": str(a.get(key, 0)), "right": str(b.get(key, 0))}
        return None

    # arithmetic ---------------------------------------------------------
    def _cap(self, other) -> int:
        return min(self.D, other.D)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = self._cap(other)
        return TruncatedSeries(D, [self.coeffs[d] + other.coeffs[d] for d in range(D + 1)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = self._cap(other)
        return TruncatedSeries(D, [self.coeffs[d] - other.coeffs[d] for d in range(D + 1)])

    def __neg__(self):
        return TruncatedSeries(self.D, [-c for c in self.coeffs])

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.D, [c * other for c in self.coeffs])
        if isinstance(other, LaurentPoly):
            return TruncatedSeries(self.D, [c * other for c in self.coeffs])
        D = self._cap(other)
        out = [LaurentPoly() for _ in range(D + 1)]
        nz_self = [(d, c) for d, c in enumerate(self.coeffs[: D + 1]) if c]
        nz_other = [(d, c) for d, c in enumerate(other.coeffs[: D + 1]) if c]
        acc: list[dict] = [dict() for _ in range(D + 1)]
        for d1, c1 in nz_self:
            for d2, c2 in nz_other:
                d = d1 + d2
                if d > D:
                    break
                bucket = acc[d]
                for (z1, y1), a in c1.terms.items():
                    for (z2, y2), b in c2.terms.items():
                        key = (z1 + z2, y1 + y2)
                        bucket[key] = bucket.get(key, 0) + a * b
        out = [LaurentPoly(b) for b in acc]
        return TruncatedSeries(D, out)

    __rmul__ = __mul__

    def shifted(self, qdeg: int = 0, z: int = 0, y: int = 0, coef=1) -> "TruncatedSeries":
        """Multiply by the monomial ``coef Q^qdeg z^z y^y`` (``qdeg >= 0``)."""
        if qdeg < 0:
            raise ValueError("negative Q shift would need coefficients above the cap")
        out = [LaurentPoly() for _ in range(self.D + 1)]
        for d in range(self.D + 1 - qdeg):
            out[d + qdeg] = self.coeffs[d].shifted(z, y, coef)
        return TruncatedSeries(self.D, out)

    def divide_one_minus(self, b: int, z: int = 0, y: int = 0, coef=1) -> "TruncatedSeries":
        """Multiply by ``1 / (1 - coef z^z y^y Q^b)`` expanded as a geometric series."""
        if b <= 0:
            raise FormalInvertibilityError("1 - t Q^b is formally invertible only for b >= 1")
        out = [LaurentPoly(c.terms) for c in self.coeffs]
        for d in range(b, self.D + 1):
            prev = out[d - b]
            if prev:
                out[d] = out[d] + prev.shifted(z, y, coef)
        return TruncatedSeries(self.D, out)

    def truncate(self, D: int) -> "TruncatedSeries":
        if D > self.D:
            raise ValueError("cannot raise the truncation degree")
        return TruncatedSeries(D, self.coeffs[: D + 1])

    def map_coefficients(self, f) -> "TruncatedSeries":
        return TruncatedSeries(self.D, [f(c) for c in self.coeffs])

    def evaluate_y(self, y) -> "TruncatedSeries":
        return self.map_coefficients(lambda c: c.evaluate_y(y))

    def __repr__(self):
        shown = [f"({c})Q^{d}" for d, c in enumerate(self.coeffs) if c][:6]
        more = " + ..." if sum(1 for c in self.coeffs if c) > 6 else ""
        return f"TruncatedSeries(D={self.D}: {' + '.join(shown) or '0'}{more})"

    # export ---------------------------------------------------------------
    def csv_rows(self) -> Iterator[tuple]:
        for d, z, y, v in self.terms():
            v = Fraction(v)
            yield d, z, y, v.numerator, v.denominator

    def write_csv(self, path_or_stream) -> None:
        own = not hasattr(path_or_stream, "write")
        fh = open(path_or_stream, "w", newline="") if own else path_or_stream
        try:
            w = csv.writer(fh)
            w.writerow(["q_degree", "z_exp", "y_exp", "numerator", "denominator"])
            w.writerows(self.csv_rows())
        finally:
            if own:
                fh.close()


def geometric_inverse(D: int, b: int, z: int = 0, y: int = 0, coef=1) -> TruncatedSeries:
    """``1 / (1 - coef z^z y^y Q^b)`` to degree ``D``."""
    return TruncatedSeries.one(D).divide_one_minus(b, z, y, coef)


def finite_product(D: int, factors: Iterable[TruncatedSeries]) -> TruncatedSeries:
    out = TruncatedSeries.one(D)
    for f in factors:
        out = out * f
    return out


def theta(D: int) -> TruncatedSeries:
    """``sum_{m in Z} Q^{m(m+1)/2} z^m`` to degree ``D``."""
    terms: dict = {}
    m = 0
    while m * (m + 1) // 2 <= D:
        terms[(m * (m + 1) // 2, m, 0)] = 1
        terms[((m + 1) * m // 2, -m - 1, 0)] = 1  # m -> -m-1 has the same exponent
        m += 1
    return TruncatedSeries.from_terms(D, terms)


def blocking_product(D: int) -> TruncatedSeries:
    """``prod_{i >= 1} (1 + (y-1) Q^i) / (1 - Q^i)`` to degree ``D``."""
    s = TruncatedSeries.one(D)
    for i in range(1, D + 1):
        s = s * one_plus(D, i, {(0, 1): 1, (0, 0): -1})
        s = s.divide_one_minus(i)
    return s


def inverse_blocking_product(D: int) -> TruncatedSeries:
    """``prod_{i >= 1} (1 - Q^i) / (1 + (y-1) Q^i)`` to degree ``D``.

    Each reciprocal is expanded as ``sum_k (1-y)^k Q^{ik}``.
    """
    s = TruncatedSeries.one(D)
    for i in range(1, D + 1):
        s = s * one_plus(D, i, {(0, 0): -1})
        inv = TruncatedSeries.one(D)
        power_poly = LaurentPoly.constant(1)
        step = LaurentPoly({(0, 0): 1, (0, 1): -1})
        for k in range(1, D // i + 1):
            power_poly = power_poly * step
            inv.coeffs[i * k] = power_poly
        s = s * inv
    return s


def jtp_product(D: int) -> TruncatedSeries:
    """``prod_{i >= 1} (1 - Q^i)(1 + Q^i z)(1 + Q^{i-1} z^{-1})`` to degree ``D``."""
    s = TruncatedSeries.one(D)
    for i in range(1, D + 2):
        if i <= D:
            s = s * one_plus(D, i, {(0, 0): -1})
            s = s * one_plus(D, i, {(1, 0): 1})
        s = s * one_plus(D, i - 1, {(-1, 0): 1})
    return s


def one_plus(D: int, b: int, terms: Mapping[tuple, object]) -> TruncatedSeries:
    """``1 + P Q^b`` where ``P`` is the Laurent polynomial given by ``terms``."""
    s = TruncatedSeries.one(D)
    if b <= D:
        s.coeffs[b] = s.coeffs[b] + LaurentPoly(terms)
    return s


def blocking_partition_product(D: int) -> TruncatedSeries:
    """``prod_{i >= 1} (1 + (y-1)Q^i)(1 + Q^i z)(1 + Q^{i-1} z^{-1})`` to degree ``D``."""
    s = TruncatedSeries.one(D)
    for i in range(1, D + 2):
        if i <= D:
            s = s * one_plus(D, i, {(0, 1): 1, (0, 0): -1})
            s = s * one_plus(D, i, {(1, 0): 1})
        s = s * one_plus(D, i - 1, {(-1, 0): 1})
    return s
