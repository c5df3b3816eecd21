"""Exact arithmetic in the ring of integers of Q(sqrt(d)).

Elements are stored as ``a + b*w`` in the integral basis ``{1, w}`` where
``w = sqrt(d)`` when ``d % 4 in (2, 3)`` and ``w = (1 + sqrt(d)) / 2`` when
``d % 4 == 1``.  Coordinates are Python ints, so arithmetic never rounds.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

ADMISSIBLE_D = (-11, -7, -3, -2, -1, 2, 3, 5, 6)
# rings in which a non-integer matrix on >= 2 rows can be small-span
TABLE_D = (-11, -7, -3, -2, -1, 2, 3, 5)

LESS, EQUAL, GREATER = -1, 0, 1


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True, eq=False)
class Ring:
    """The ring of integers O_K of K = Q(sqrt(d))."""

    d: int
    half_basis: bool = field(init=False)
    # w^2 = trace_w * w + norm_term
    trace_w: int = field(init=False)
    norm_term: int = field(init=False)

    def __post_init__(self) -> None:
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise ValueError(f"d={self.d} is not a squarefree integer other than 0, 1")
        half = self.d % 4 == 1
        object.__setattr__(self, "half_basis", half)
        object.__setattr__(self, "trace_w", 1 if half else 0)
        object.__setattr__(self, "norm_term", (self.d - 1) // 4 if half else self.d)

    @property
    def is_imaginary(self) -> bool:
        return self.d < 0

    @property
    def omega_kind(self) -> str:
        return "half" if self.half_basis else "sqrt"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("Ring", self.d))

    def __repr__(self) -> str:
        return f"Ring({self.d})"

    def __call__(self, a: int = 0, b: int = 0) -> "QuadInt":
        return QuadInt(self, a, b)

    @property
    def zero(self) -> "QuadInt":
        return QuadInt(self, 0, 0)

    @property
    def one(self) -> "QuadInt":
        return QuadInt(self, 1, 0)

    @property
    def omega(self) -> "QuadInt":
        return QuadInt(self, 0, 1)

    def sqrt_d(self, sign: int = 1) -> complex | float:
        if self.d < 0:
            return complex(0.0, sign * math.sqrt(-self.d))
        return sign * math.sqrt(self.d)

    def omega_value(self, sign: int = 1) -> complex | float:
        """Numerical image of w under the embedding sqrt(d) -> sign*sqrt(d)."""
        s = self.sqrt_d(sign)
        return (1 + s) / 2 if self.half_basis else s


@lru_cache(maxsize=None)
def ring_make(d: int) -> Ring:
    return Ring(d)


class QuadInt:
    """An element ``a + b*w`` of a quadratic integer ring."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: Ring, a: int = 0, b: int = 0) -> None:
        self.ring = ring
        self.a = a
        self.b = b

    # -- basic protocol -------------------------------------------------
    def __repr__(self) -> str:
        return f"QuadInt(d={self.ring.d}, a={self.a}, b={self.b})"

    def __str__(self) -> str:
        return format_qi(self.a, self.b)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadInt):
            return self.a == other.a and self.b == other.b and self.ring.d == other.ring.d
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def key(self) -> tuple[int, int]:
        """Global sort key: ``b`` first, then ``a``."""
        return (self.b, self.a)

    def __lt__(self, other: "QuadInt") -> bool:
        return self.key() < other.key()

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def _coerce(self, other: object) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.ring.d != self.ring.d:
                raise ValueError(f"mixed rings: d={self.ring.d} and d={other.ring.d}")
            return other
        if isinstance(other, int):
            return QuadInt(self.ring, other, 0)
        raise TypeError(f"cannot combine QuadInt with {type(other).__name__}")

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: QuadInt | int) -> QuadInt:
        o = self._coerce(other)
        return QuadInt(self.ring, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        o = self._coerce(other)
        return QuadInt(self.ring, self.a - o.a, self.b - o.b)

    def __rsub__(self, other: QuadInt | int) -> QuadInt:
        return self._coerce(other) - self

    def __neg__(self) -> QuadInt:
        return QuadInt(self.ring, -self.a, -self.b)

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.ring, self.a * other, self.b * other)
        o = self._coerce(other)
        r = self.ring
        a, b, c, e = self.a, self.b, o.a, o.b
        be = b * e
        return QuadInt(r, a * c + be * r.norm_term, a * e + b * c + be * r.trace_w)

    __rmul__ = __mul__

    def conj(self) -> QuadInt:
        """Image under the nontrivial automorphism of Q(sqrt(d))."""
        return QuadInt(self.ring, self.a + self.b * self.ring.trace_w, -self.b)

    def star(self) -> QuadInt:
        """Complex conjugate: the Galois map for d < 0, the identity for d > 0."""
        return self.conj() if self.ring.d < 0 else self

    def norm(self) -> int:
        """x * conj(x), a rational integer."""
        r = self.ring
        a, b = self.a, self.b
        return a * a + r.trace_w * a * b - r.norm_term * b * b

    def abs2(self) -> QuadInt:
        """x * star(x); the absolute square used by templates."""
        return self * self.star()

    def is_rational(self) -> bool:
        return self.b == 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def rational_parts(self) -> tuple[Fraction, Fraction]:
        """(u, v) with x = u + v*sqrt(d)."""
        if self.ring.half_basis:
            return Fraction(2 * self.a + self.b, 2), Fraction(self.b, 2)
        return Fraction(self.a), Fraction(self.b)

    def embed(self, sign: int = 1) -> complex | float:
        return self.a + self.b * self.ring.omega_value(sign)

    def divide(self, other: QuadInt) -> QuadInt | None:
        """Exact quotient self/other in the ring, or None if it is not integral."""
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic ring")
        num = self * other.conj()
        if num.a % n or num.b % n:
            return None
        return QuadInt(self.ring, num.a // n, num.b // n)

    def to_list(self) -> list[int]:
        return [self.a, self.b]


def format_qi(a: int, b: int) -> str:
    if b == 0:
        return str(a)
    bw = "w" if b == 1 else "-w" if b == -1 else f"{b}*w"
    if a == 0:
        return bw
    return f"{a}{'+' if b > 0 else '-'}{bw.lstrip('-')}"


# -- exact sign / size comparisons ------------------------------------------
def _sign_sqrt_expr(u: Fraction, v: Fraction, d: int) -> int:
    """Sign of u + v*sqrt(d) for d > 0."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if (u > 0) == (v > 0):
        return 1 if u > 0 else -1
    # opposite signs: compare u^2 with d v^2
    lhs, rhs = u * u, d * v * v
    if lhs == rhs:
        return 0
    if lhs > rhs:
        return 1 if u > 0 else -1
    return 1 if v > 0 else -1


def real_sign(x: QuadInt, sign: int = 1) -> int:
    """Exact sign of the real embedding sqrt(d) -> sign*sqrt(d); requires d > 0."""
    if x.ring.d < 0:
        raise ValueError("real_sign needs a real quadratic ring")
    u, v = x.rational_parts()
    return _sign_sqrt_expr(u, sign * v, x.ring.d)


def real_cmp(x: QuadInt, q: Fraction | int, sign: int = 1) -> int:
    """Compare the embedded value of a real-ring element with a rational."""
    u, v = x.rational_parts()
    if x.ring.d < 0:
        if v != 0:
            raise ValueError("element is not real")
        t = u - q
        return (t > 0) - (t < 0)
    return _sign_sqrt_expr(u - Fraction(q), sign * v, x.ring.d)


def house_cmp(x: QuadInt, q: Fraction | int) -> int:
    """Exact trichotomy of house(x) against a nonnegative rational q.

    Returns LESS, EQUAL or GREATER.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("q must be nonnegative")
    if x.ring.d < 0:
        n, q2 = x.norm(), q * q
        return LESS if n < q2 else EQUAL if n == q2 else GREATER
    # house = max over both embeddings of |x|
    worst = LESS
    for s in (1, -1):
        hi = real_cmp(x, q, s)    # x - q
        lo = real_cmp(x, -q, s)   # x + q
        if hi > 0 or lo < 0:
            return GREATER
        if hi == 0 or lo == 0:
            worst = EQUAL
    return worst


def house(x: QuadInt) -> float:
    if x.ring.d < 0:
        return math.sqrt(x.norm())
    return max(abs(x.embed(1)), abs(x.embed(-1)))


# -- finite element sets -----------------------------------------------------
def _box(ring: Ring, bound: Fraction) -> Iterator[tuple[int, int]]:
    # |b| * |w - conj(w)| <= 2 * house(x); generous box, filtered exactly later
    span = abs(ring.omega_value(1) - ring.omega_value(-1))
    bmax = int(math.floor(2 * float(bound) / span)) + 1
    for b in range(-bmax, bmax + 1):
        centre = -b * (ring.trace_w / 2)
        amax = int(math.ceil(float(bound) + abs(b) * span / 2 + abs(centre))) + 1
        for a in range(-amax, amax + 1):
            yield a, b


@lru_cache(maxsize=None)
def _elements_below(d: int, bound: Fraction, real_only: bool) -> tuple[QuadInt, ...]:
    ring = ring_make(d)
    out = []
    for a, b in _box(ring, bound):
        if real_only and d < 0 and b != 0:
            continue
        x = QuadInt(ring, a, b)
        if house_cmp(x, bound) == LESS:
            out.append(x)
    out.sort(key=QuadInt.key)
    return tuple(out)


def elements_below(ring: Ring, bound: Fraction | int, real_only: bool = False) -> list[QuadInt]:
    """All x with house(x) < bound, sorted by (b, a).

    ``real_only`` keeps only elements usable as charges: rational integers when
    d < 0, every element when d > 0.
    """
    bound = Fraction(bound)
    if bound <= 0:
        return []
    return list(_elements_below(ring.d, bound, real_only))


@lru_cache(maxsize=None)
def _torsion_units(d: int) -> tuple[QuadInt, ...]:
    ring = ring_make(d)
    if d > 0:
        units = [ring(1), ring(-1)]
    else:
        units = [x for x in _elements_below(d, Fraction(3, 2), False) if x.norm() == 1]
    units.sort(key=lambda u: (u != 1, u != -1, u.key()))
    return tuple(units)


def torsion_units(ring: Ring) -> list[QuadInt]:
    """Units u with u * star(u) = 1, i.e. the admissible switching units."""
    return list(_torsion_units(ring.d))



_QI_RE = re.compile(r"^(?:([+-]?\d+)(?=[+-]))?([+-]?)(?:(\d+)\*)?w$")


def parse_qi(ring: Ring, text: str) -> QuadInt:
    """Inverse of ``str(QuadInt)``: accepts ``3``, ``w``, ``-w``, ``1-2*w``, ``2*w``."""
    t = text.replace(" ", "")
    if re.fullmatch(r"[+-]?\d+", t):
        return QuadInt(ring, int(t), 0)
    m = _QI_RE.match(t)
    if m is None:
        raise ValueError(f"cannot parse ring element {text!r}")
    a = int(m.group(1)) if m.group(1) else 0
    b = int(m.group(3)) if m.group(3) else 1
    return QuadInt(ring, a, -b if m.group(2) == "-" else b)
