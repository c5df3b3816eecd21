"""Exact real-root location with Sturm sequences.

Polynomials are coefficient lists (low degree first) over Q or over a real
quadratic field Q(sqrt(d)) with a chosen real embedding.  Every decision is
made with exact sign tests; nothing here uses floating point.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .charpoly import IntPoly, RingPoly
from .ring import _sign_sqrt_expr

WINDOW_LO = Fraction(-2)
WINDOW_HI = Fraction(5, 2)


class NotTotallyReal(ValueError):
    """The polynomial has non-real roots, so it is not a Hermitian char poly."""


class SpanClass(Enum):
    LESS = "LessThan4"
    EXACT = "Exactly4"
    GREATER = "GreaterThan4"

    def __str__(self) -> str:
        return {"LessThan4": "<4", "Exactly4": "=4", "GreaterThan4": ">4"}[self.value]


class RealQuad:
    """u + v*sqrt(d) in a real quadratic field, embedded with sqrt(d) > 0."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u, v, d: int) -> None:
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.d = d

    def _lift(self, o) -> "RealQuad":
        return o if isinstance(o, RealQuad) else RealQuad(o, 0, self.d)

    def __add__(self, o):
        o = self._lift(o)
        return RealQuad(self.u + o.u, self.v + o.v, self.d)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return RealQuad(self.u - o.u, self.v - o.v, self.d)

    def __rsub__(self, o):
        return self._lift(o) - self

    def __neg__(self):
        return RealQuad(-self.u, -self.v, self.d)

    def __mul__(self, o):
        o = self._lift(o)
        return RealQuad(self.u * o.u + self.d * self.v * o.v, self.u * o.v + self.v * o.u, self.d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        n = o.u * o.u - self.d * o.v * o.v
        if n == 0:
            raise ZeroDivisionError("division by zero")
        num = self * RealQuad(o.u, -o.v, self.d)
        return RealQuad(num.u / n, num.v / n, self.d)

    def __eq__(self, o) -> bool:
        o = self._lift(o)
        return self.u == o.u and self.v == o.v

    def __hash__(self) -> int:
        return hash((self.u, self.v))

    def sign(self) -> int:
        return _sign_sqrt_expr(self.u, self.v, self.d)

    def upper_abs(self) -> Fraction:
        return abs(self.u) + abs(self.v) * (math.isqrt(self.d) + 1)

    def __repr__(self) -> str:
        return f"RealQuad({self.u}, {self.v}, d={self.d})"


def sgn(x) -> int:
    if isinstance(x, RealQuad):
        return x.sign()
    return (x > 0) - (x < 0)


def _abs_bound(x) -> Fraction:
    return x.upper_abs() if isinstance(x, RealQuad) else abs(Fraction(x))


def _is_zero(x) -> bool:
    return sgn(x) == 0


# -- polynomial arithmetic over a field (lists, low degree first) ---------------
def trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and _is_zero(p[-1]):
        p.pop()
    return p


def deg(p: Sequence) -> int:
    p = trim(p)
    return -1 if len(p) == 1 and _is_zero(p[0]) else len(p) - 1


def peval(p: Sequence, x):
    acc = p[-1] * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p: Sequence) -> list:
    if len(p) <= 1:
        return [p[0] * 0]
    return [p[i] * i for i in range(1, len(p))]


def pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = trim(a), trim(b)
    db = deg(b)
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    zero = a[0] * 0
    if deg(a) < db:
        return [zero], a
    rem = list(a)
    q = [zero] * (len(a) - db)
    lead = b[db]
    for k in range(len(a) - 1 - db, -1, -1):
        t = rem[k + db] / lead
        q[k] = t
        if not _is_zero(t):
            for i in range(db + 1):
                rem[k + i] = rem[k + i] - t * b[i]
    return trim(q), trim(rem[:db] or [zero])


def pmonic(p: Sequence) -> list:
    p = trim(p)
    lead = p[-1]
    return [c / lead for c in p]


def pgcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while deg(b) >= 0:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a) if deg(a) >= 0 else a


def ptranslate(p: Sequence, c) -> list:
    """p(x + c)."""
    zero = p[0] * 0
    out = [zero]
    for a in reversed(p):
        nxt = [zero] * (len(out) + 1)
        for i, t in enumerate(out):
            nxt[i + 1] = nxt[i + 1] + t
            nxt[i] = nxt[i] + t * c
        nxt[0] = nxt[0] + a
        out = nxt
    return trim(out)


def squarefree(p: Sequence) -> list:
    g = pgcd(p, pderiv(p))
    return pmonic(pdivmod(p, g)[0]) if deg(g) > 0 else pmonic(p)


def yun(p: Sequence) -> list[list]:
    """Squarefree factors f_1, f_2, ... with p = prod f_i^i (monic p)."""
    p = pmonic(p)
    out = []
    a = pgcd(p, pderiv(p))
    b = pdivmod(p, a)[0]
    c = pdivmod(pderiv(p), a)[0]
    d = [ci - di for ci, di in zip_pad(c, pderiv(b))]
    while deg(b) > 0:
        a = pgcd(b, d)
        out.append(pmonic(a) if deg(a) >= 0 else a)
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = [ci - di for ci, di in zip_pad(c, pderiv(b))]
    return out


def zip_pad(a: Sequence, b: Sequence):
    zero = (a[0] if a else b[0]) * 0
    n = max(len(a), len(b))
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return zip(a, b)


# -- Sturm machinery -------------------------------------------------------------
class Sturm:
    """Sturm chain of the squarefree part of a polynomial."""

    def __init__(self, coeffs: Sequence) -> None:
        # plain ints would turn into floats under true division
        coeffs = [c if isinstance(c, (RealQuad, Fraction)) else Fraction(c) for c in coeffs]
        q = squarefree(coeffs)
        self.poly = q
        chain = [q, pderiv(q)]
        while deg(chain[-1]) > 0:
            r = pdivmod(chain[-2], chain[-1])[1]
            if deg(r) < 0:
                break
            chain.append([-c for c in r])
        self.chain = [c for c in chain if deg(c) >= 0]

    @property
    def degree(self) -> int:
        return deg(self.poly)

    def _variations(self, signs: list[int]) -> int:
        signs = [s for s in signs if s]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    def var_at(self, x) -> int:
        return self._variations([sgn(peval(p, x)) for p in self.chain])

    def var_inf(self, sign: int) -> int:
        out = []
        for p in self.chain:
            p = trim(p)
            s = sgn(p[-1])
            if sign < 0 and (len(p) - 1) % 2:
                s = -s
            out.append(s)
        return self._variations(out)

    def total(self) -> int:
        return self.var_inf(-1) - self.var_inf(1)

    def at_most(self, x) -> int:
        """Number of distinct real roots <= x."""
        return self.var_inf(-1) - self.var_at(x)

    def is_root(self, x) -> bool:
        return _is_zero(peval(self.poly, x))

    def count(self, lo=None, hi=None, lo_inclusive: bool = True, hi_inclusive: bool = False) -> int:
        """Distinct real roots in the interval; ``None`` stands for infinity."""
        upper = self.total() if hi is None else self.at_most(hi)
        if hi is not None and not hi_inclusive and self.is_root(hi):
            upper -= 1
        lower = 0 if lo is None else self.at_most(lo)
        if lo is not None and lo_inclusive and self.is_root(lo):
            lower -= 1
        return upper - lower

    def root_bound(self) -> Fraction:
        p = trim(self.poly)
        lead = _abs_bound(p[-1]) if not isinstance(p[-1], Fraction) else abs(p[-1])
        m = max((_abs_bound(c) for c in p[:-1]), default=Fraction(0))
        return 1 + m / lead if lead else 1 + m


def as_field_coeffs(p: IntPoly | RingPoly | Sequence, embedding: int = 1) -> list:
    """Coefficient list over Q or Q(sqrt(d)) for the requested real embedding."""
    if isinstance(p, IntPoly):
        return [Fraction(c) for c in p.coeffs]
    if isinstance(p, RingPoly):
        if all(c.b == 0 for c in p.coeffs):
            return [Fraction(c.a) for c in p.coeffs]
        if p.ring.d < 0:
            raise ValueError("non-real coefficients over an imaginary ring")
        out = []
        for c in p.coeffs:
            u, v = c.rational_parts()
            out.append(RealQuad(u, embedding * v, p.ring.d))
        return out
    return [c if isinstance(c, RealQuad) else Fraction(c) for c in p]


def sturm_count(
    p,
    lo=None,
    hi=None,
    hi_inclusive: bool = False,
    embedding: int = 1,
    lo_inclusive: bool = True,
) -> int:
    """Distinct real roots in [lo, hi) by default; endpoint flags adjust."""
    return Sturm(as_field_coeffs(p, embedding)).count(
        None if lo is None else Fraction(lo),
        None if hi is None else Fraction(hi),
        lo_inclusive=lo_inclusive,
        hi_inclusive=hi_inclusive,
    )


def real_roots_with_multiplicity(coeffs: Sequence) -> int:
    return sum(i * Sturm(f).total() for i, f in enumerate(yun(coeffs), start=1) if deg(f) > 0)


def _prepare(p, embedding: int = 1) -> Sturm:
    coeffs = trim(as_field_coeffs(p, embedding))
    if real_roots_with_multiplicity(coeffs) < deg(coeffs):
        raise NotTotallyReal("polynomial has non-real roots")
    return Sturm(coeffs)


def window_check(p, embedding: int = 1) -> bool:
    """All roots in [-2, 5/2)."""
    s = _prepare(p, embedding)
    return s.count(WINDOW_LO, WINDOW_HI) == s.total()


def is_cyclotomic(p, embedding: int = 1) -> bool:
    """All roots in [-2, 2]."""
    s = _prepare(p, embedding)
    return s.count(Fraction(-2), Fraction(2), hi_inclusive=True) == s.total()


def _isolate_min(s: Sturm, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    # invariant: no root <= lo, at least one root <= hi
    while True:
        if s.at_most(hi) - s.at_most(lo) == 1:
            return lo, hi
        mid = (lo + hi) / 2
        if s.at_most(mid) >= 1:
            hi = mid
        else:
            lo = mid


def _isolate_max(s: Sturm, lo: Fraction, hi: Fraction, r: int) -> tuple[Fraction, Fraction]:
    # invariant: fewer than r roots <= lo, all r roots <= hi
    while True:
        if s.at_most(hi) - s.at_most(lo) == 1:
            return lo, hi
        mid = (lo + hi) / 2
        if s.at_most(mid) == r:
            hi = mid
        else:
            lo = mid


def _halve_min(s: Sturm, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    mid = (lo + hi) / 2
    return (lo, mid) if s.at_most(mid) - s.at_most(lo) == 1 else (mid, hi)


def span_class(p, embedding: int = 1) -> SpanClass:
    """Exact comparison of (largest root - smallest root) with 4."""
    s = _prepare(p, embedding)
    r = s.total()
    if r <= 1:
        return SpanClass.LESS
    b = s.root_bound() + 1
    l1, u1 = _isolate_min(s, -b, b)
    l2, u2 = _isolate_max(s, -b, b, r)
    four = Fraction(4)
    q4 = ptranslate(s.poly, four)
    h = pgcd(s.poly, q4)
    if deg(h) > 0:
        sh = Sturm(h)
        if sh.at_most(u1) - sh.at_most(l1) > 0:
            # smallest root + 4 is a root; decide whether it is the largest
            s4 = Sturm(q4)
            while s4.at_most(u1) - s4.at_most(l1) > 1:
                l1, u1 = _halve_min(s, l1, u1)
            above = s4.total() - s4.at_most(u1)
            return SpanClass.EXACT if above == 0 else SpanClass.GREATER
    while True:
        if u2 - l1 <= four:
            return SpanClass.LESS
        if l2 - u1 >= four:
            return SpanClass.GREATER
        l1, u1 = _halve_min(s, l1, u1)
        mid = (l2 + u2) / 2
        l2, u2 = (mid, u2) if s.at_most(mid) < r else (l2, mid)


def root_extremes(p, embedding: int = 1, width: Fraction = Fraction(1, 2**30)) -> tuple[Fraction, Fraction]:
    """Rational approximations (within width) of the smallest and largest root."""
    s = _prepare(p, embedding)
    b = s.root_bound() + 1
    l1, u1 = _isolate_min(s, -b, b)
    l2, u2 = _isolate_max(s, -b, b, s.total())
    while u1 - l1 > width:
        l1, u1 = _halve_min(s, l1, u1)
    while u2 - l2 > width:
        mid = (l2 + u2) / 2
        l2, u2 = (mid, u2) if s.at_most(mid) < s.total() else (l2, mid)
    return u1, u2


class RootWindowVerdict:
    __slots__ = ("in_window", "span_class", "cyclotomic")

    def __init__(self, in_window: bool, span: SpanClass, cyclotomic: bool) -> None:
        self.in_window = in_window
        self.span_class = span
        self.cyclotomic = cyclotomic

    @property
    def small_span(self) -> bool:
        return self.in_window and self.span_class is SpanClass.LESS

    def __repr__(self) -> str:
        return f"RootWindowVerdict(in_window={self.in_window}, span={self.span_class}, cyclotomic={self.cyclotomic})"


def verdict(p, embedding: int = 1) -> RootWindowVerdict:
    return RootWindowVerdict(window_check(p, embedding), span_class(p, embedding), is_cyclotomic(p, embedding))
