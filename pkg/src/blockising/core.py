"""Scalars, model parameters, interaction kernels and configuration encodings.

Two scalar modes are supported. Exact mode uses :class:`fractions.Fraction`
(ints are accepted and promoted); float mode uses Python floats. The mode of
a computation is decided by the type of ``u`` and ``q`` in
:class:`ModelParams`, and every helper here preserves it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Union

Scalar = Union[Fraction, float]


class ExactnessError(ValueError):
    """Raised when an exact-mode computation would need an irrational value."""


class DivergenceError(ValueError):
    """Raised when a long-range pair sum is not finite under the kernel's declaration."""


def parse_scalar(text, exact: bool = True) -> Scalar:
    """Parse ``"p/q"``, an int, or a decimal into a scalar of the requested mode."""
    if isinstance(text, (Fraction, int)) and not isinstance(text, bool):
        value = Fraction(text)
    elif isinstance(text, float):
        return text if not exact else Fraction(text).limit_denominator(10**12)
    else:
        value = Fraction(str(text).strip())
    return value if exact else float(value)


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def _as_integer(e) -> int | None:
    if isinstance(e, int):
        return e
    if isinstance(e, Fraction) and e.denominator == 1:
        return e.numerator
    if isinstance(e, float) and e.is_integer():
        return int(e)
    return None


def power(base: Scalar, exponent) -> Scalar:
    """``base ** exponent`` keeping exactness when the exponent is integral.

    In exact mode a non-integral exponent raises :class:`ExactnessError`
    instead of silently degrading to a float.
    """
    k = _as_integer(exponent)
    if is_exact(base):
        if k is None:
            raise ExactnessError(f"{base}^{exponent} is not rational")
        return Fraction(base) ** k
    return float(base) ** (k if k is not None else float(exponent))


def heat_bath(u: Scalar, s) -> Scalar:
    """Return ``1/2 (1 - tanh(beta*s/2))`` with ``u = exp(-beta)``.

    This equals ``u^s / (1 + u^s)``; the form ``1 / (1 + u^-s)`` is used for
    negative ``s`` so large exponents stay well scaled in float mode.
    """
    if s >= 0:
        t = power(u, s)
        return t / (1 + t)
    return 1 / (1 + power(u, -s))


def close(a: Scalar, b: Scalar, tol: float = 1e-12) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=tol, abs_tol=tol)


# ---------------------------------------------------------------------------
# interaction kernels


class NearestNeighbourKernel:
    """A bond energy ``J(i)`` on the pair ``(i, i+1)``."""

    long_range = False

    def J(self, i: int):  # pragma: no cover - abstract
        raise NotImplementedError

    def to_json(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantKernel(NearestNeighbourKernel):
    value: int = 1

    def J(self, i: int):
        return self.value

    def to_json(self) -> dict:
        return {"type": "constant"} if self.value == 1 else {"type": "constant", "value": str(self.value)}


@dataclass(frozen=True)
class LinearKernel(NearestNeighbourKernel):
    """``J(i) = i``."""

    def J(self, i: int):
        return i

    def to_json(self) -> dict:
        return {"type": "linear"}


@dataclass(frozen=True)
class TableKernel(NearestNeighbourKernel):
    """Finite table of bond energies extended affinely beyond its ends.

    The slope used on each side is the difference of the two outermost
    entries on that side (zero for a one-entry table).
    """

    start: int
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("table kernel needs at least one value")
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def stop(self) -> int:
        return self.start + len(self.values) - 1

    def J(self, i: int):
        v = self.values
        if i < self.start:
            slope = v[1] - v[0] if len(v) > 1 else 0
            return v[0] - slope * (self.start - i)
        if i > self.stop:
            slope = v[-1] - v[-2] if len(v) > 1 else 0
            return v[-1] + slope * (i - self.stop)
        return v[i - self.start]

    def to_json(self) -> dict:
        return {"type": "table", "start": self.start, "values": [str(x) for x in self.values]}


@dataclass(frozen=True)
class LongRangeKernel:
    """Translation-invariant pair interaction ``J(i, j) = profile[|i - j|]``.

    ``profile`` maps distances ``d >= 1`` to nonnegative values and must be
    finitely supported; ``range_max`` is the declared support radius. A
    kernel whose profile has entries beyond ``range_max`` fails its decay
    declaration and is rejected with :class:`DivergenceError`.
    """

    profile: tuple
    range_max: int

    long_range = True

    def __init__(self, profile: Mapping[int, object], range_max: int | None = None):
        items = sorted((int(d), v) for d, v in profile.items() if v != 0)
        for d, v in items:
            if d <= 0:
                raise ValueError("long-range profile is indexed by distances d >= 1")
            if v < 0:
                raise ValueError("long-range couplings must be nonnegative")
        declared = max((d for d, _ in items), default=0) if range_max is None else int(range_max)
        if items and items[-1][0] > declared:
            raise DivergenceError(
                f"profile has support up to {items[-1][0]} beyond declared range {declared}")
        object.__setattr__(self, "profile", tuple(items))
        object.__setattr__(self, "range_max", declared)

    @classmethod
    def from_function(cls, f: Callable[[int], object], range_max: int) -> "LongRangeKernel":
        return cls({d: f(d) for d in range(1, range_max + 1)}, range_max)

    @classmethod
    def nearest_neighbour(cls, value=1) -> "LongRangeKernel":
        return cls({1: value}, 1)

    def pair(self, i: int, j: int):
        d = abs(i - j)
        if d == 0 or d > self.range_max:
            return 0
        for dd, v in self.profile:
            if dd == d:
                return v
        return 0

    def to_json(self) -> dict:
        return {"type": "longrange", "profile": {str(d): str(v) for d, v in self.profile},
                "range_max": self.range_max}


InteractionKernel = Union[NearestNeighbourKernel, LongRangeKernel]


def kernel_from_json(obj: Mapping) -> InteractionKernel:
    kind = obj.get("type")
    if kind == "constant":
        return ConstantKernel(parse_scalar(obj.get("value", 1)))
    if kind == "linear":
        return LinearKernel()
    if kind == "table":
        return TableKernel(int(obj["start"]), tuple(parse_scalar(v) for v in obj["values"]))
    if kind == "longrange":
        prof = {int(d): parse_scalar(v) for d, v in obj["profile"].items()}
        return LongRangeKernel(prof, obj.get("range_max"))
    raise ValueError(f"unknown kernel type {kind!r}")


def _normalise_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; ``u = exp(-beta)``.

    The scalar mode is exact when both ``u`` and ``q`` are rational.
    """

    u: Scalar
    q: Scalar
    c: Scalar = Fraction(0)
    n: int = 0
    kernel: InteractionKernel = field(default_factory=ConstantKernel)

    def __post_init__(self):
        u, q, c = (_normalise_scalar(x) for x in (self.u, self.q, self.c))
        if is_exact(u) != is_exact(q):
            u, q, c = float(u), float(q), float(c)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "c", c)
        if not 0 < q < 1:
            raise ValueError("q must lie in (0, 1)")
        if not 0 < u <= 1:
            raise ValueError("u = exp(-beta) must lie in (0, 1]")
        if isinstance(self.kernel, LinearKernel) and not u < q:
            raise ValueError("J(i) = i requires exp(-beta) < q")

    @property
    def exact(self) -> bool:
        return is_exact(self.u)

    def with_(self, **changes) -> "ModelParams":
        data = dict(u=self.u, q=self.q, c=self.c, n=self.n, kernel=self.kernel)
        data.update(changes)
        return ModelParams(**data)

    def to_json(self) -> dict:
        return {"u": str(self.u), "q": str(self.q), "c": str(self.c), "n": self.n,
                "kernel": self.kernel.to_json()}

    @classmethod
    def from_json(cls, obj: Mapping, exact: bool = True) -> "ModelParams":
        return cls(u=parse_scalar(obj["u"], exact), q=parse_scalar(obj["q"], exact),
                   c=parse_scalar(obj.get("c", "0"), exact), n=int(obj.get("n", 0)),
                   kernel=kernel_from_json(obj.get("kernel", {"type": "constant"})))

    @classmethod
    def load(cls, path, exact: bool = True) -> "ModelParams":
        with open(path) as fh:
            return cls.from_json(json.load(fh), exact)


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True, eq=False)
class SpinConfiguration:
    """A blocking spin configuration.

    Sites ``start .. start+len(spins)-1`` are explicit; every site left of the
    window is -1 and every site right of it is +1. Instances are always
    stored in canonical form: the window starts with +1 and ends with -1,
    or it is empty, in which case ``start`` is the first +1 site.
    """

    start: int
    spins: tuple

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if any(s not in (-1, 1) for s in spins):
            raise ValueError("spins must be +1 or -1")
        start = self.start
        lo, hi = 0, len(spins)
        while lo < hi and spins[lo] == -1:
            lo += 1
        while hi > lo and spins[hi - 1] == 1:
            hi -= 1
        if lo == hi:
            # pure step: first +1 sits right after the last leading -1
            start, spins = start + lo, ()
        else:
            start, spins = start + lo, spins[lo:hi]
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "spins", spins)

    @classmethod
    def from_string(cls, text: str, start: int) -> "SpinConfiguration":
        """Build from a string of ``+``/``-`` characters whose first site is ``start``."""
        return cls(start, tuple(1 if ch == "+" else -1 for ch in text if ch in "+-"))

    def __eq__(self, other):
        if not isinstance(other, SpinConfiguration):
            return NotImplemented
        return self.start == other.start and self.spins == other.spins

    def __hash__(self):
        return hash((self.start, self.spins))

    @property
    def stop(self) -> int:
        """Last explicit site (``start - 1`` for a step profile)."""
        return self.start + len(self.spins) - 1

    def __getitem__(self, i: int) -> int:
        if i < self.start:
            return -1
        if i > self.stop:
            return 1
        return self.spins[i - self.start]

    def positive_sites(self) -> Iterator[int]:
        """Positions ``S_1 < S_2 < ...`` of the +1 spins (an infinite iterator)."""
        for k, s in enumerate(self.spins):
            if s == 1:
                yield self.start + k
        i = self.stop + 1
        while True:
            yield i
            i += 1

    def negative_sites_in_window(self) -> list[int]:
        return [self.start + k for k, s in enumerate(self.spins) if s == -1]

    def disagreements(self) -> list[int]:
        """Sites ``i`` with ``sigma_i != sigma_{i+1}``."""
        if not self.spins:
            return [self.start - 1]
        out = [self.start - 1]  # the -1 sea meets the leading +1
        for k in range(len(self.spins) - 1):
            if self.spins[k] != self.spins[k + 1]:
                out.append(self.start + k)
        out.append(self.stop)  # the trailing -1 meets the +1 sea
        return out

    def to_string(self, lo: int | None = None, hi: int | None = None) -> str:
        lo = self.start - 1 if lo is None else lo
        hi = self.stop + 1 if hi is None else hi
        return "".join("+" if self[i] == 1 else "-" for i in range(lo, hi + 1))

    def swapped(self, i: int, j: int) -> "SpinConfiguration":
        """Exchange the spins at sites ``i`` and ``j``."""
        lo, hi = min(i, j, self.start), max(i, j, self.stop)
        window = [self[k] for k in range(lo, hi + 1)]
        window[i - lo], window[j - lo] = window[j - lo], window[i - lo]
        return SpinConfiguration(lo, tuple(window))

    def __repr__(self):
        return f"SpinConfiguration({self.start}, '{self.to_string(self.start, self.stop)}')"


def canonicalize(sigma: SpinConfiguration) -> SpinConfiguration:
    """Minimal window encoding of ``sigma``.

    Instances are canonical on construction, so this rebuilds the value and
    is idempotent.
    """
    return SpinConfiguration(sigma.start, sigma.spins)


def step_profile(n: int) -> SpinConfiguration:
    """``sigma^n``: -1 at every site ``i <= n`` and +1 beyond."""
    return SpinConfiguration(n + 1, ())


@dataclass(frozen=True, eq=False)
class ParticleConfiguration:
    """Finitely supported occupations ``omega_{-r}``, ``r = 1, 2, ...``.

    Stored as a sorted tuple of ``(r, count)`` pairs with ``count >= 1``.
    """

    items: tuple

    def __init__(self, occupations: Union[Mapping[int, int], Iterable[int], tuple] = ()):
        if isinstance(occupations, ParticleConfiguration):
            pairs = occupations.items
        elif isinstance(occupations, Mapping):
            pairs = occupations.items()
        else:
            # a plain sequence lists omega_{-1}, omega_{-2}, ...
            pairs = ((r, k) for r, k in enumerate(occupations, start=1))
        clean = []
        for r, k in pairs:
            r, k = int(r), int(k)
            if r < 1:
                raise ValueError("particle sites are -1, -2, ...")
            if k < 0:
                raise ValueError("occupations are nonnegative")
            if k:
                clean.append((r, k))
        clean.sort()
        if len({r for r, _ in clean}) != len(clean):
            raise ValueError("duplicate site")
        object.__setattr__(self, "items", tuple(clean))

    def __eq__(self, other):
        if not isinstance(other, ParticleConfiguration):
            return NotImplemented
        return self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __getitem__(self, r: int) -> int:
        for site, k in self.items:
            if site == r:
                return k
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    @property
    def max_site(self) -> int:
        return self.items[-1][0] if self.items else 0

    def as_list(self, length: int | None = None) -> list[int]:
        """``[omega_{-1}, ..., omega_{-length}]``."""
        length = self.max_site if length is None else length
        out = [0] * length
        for r, k in self.items:
            if r <= length:
                out[r - 1] = k
        return out

    @property
    def rank(self) -> int:
        """``sum_i i * omega_{-i}``: the size of the associated partition."""
        return sum(r * k for r, k in self.items)

    @property
    def particles(self) -> int:
        return sum(k for _, k in self.items)

    def suffix_sums(self) -> list[int]:
        """``P[r] = sum_{i >= r} omega_{-i}`` for ``r = 0 .. max_site + 1``."""
        omega = self.as_list()
        out = [0] * (len(omega) + 2)
        for r in range(len(omega), 0, -1):
            out[r] = out[r + 1] + omega[r - 1]
        out[0] = out[1]
        return out

    @classmethod
    def from_partition(cls, parts: Iterable[int]) -> "ParticleConfiguration":
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        return cls(counts)

    def to_partition(self) -> tuple[int, ...]:
        return tuple(r for r, k in reversed(self.items) for _ in range(k))

    def __repr__(self):
        return f"ParticleConfiguration({dict(self.items)})"


def run_lengths(omega: ParticleConfiguration, upto: int) -> list[int]:
    """``[r_0, r_1, ..., r_upto]`` with ``r_i = max(omega_{-i}, 1)`` and ``r_0 = 1``."""
    return [1] + [max(omega[i], 1) for i in range(1, upto + 1)]
