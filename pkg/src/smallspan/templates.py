"""Parametric families of weighted graphs and their certificates.

A template fixes every edge weight except a few irrational ones, which are
only pinned down by their absolute square: ``alpha1`` has absolute square 1
and ``alpha2`` has absolute square 2.  An instance substitutes a concrete
ring element for the weight.

Labelings are fixed per family and documented on each builder.  Edge
weights are given as ``w(i, j)``; the reverse entry is ``star(w(i, j))``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Sequence

from .charpoly import char_poly, det
from .matrix import HermitianGraph, validate
from .realroots import SpanClass, is_cyclotomic, span_class, window_check
from .ring import QuadInt, Ring, parse_qi, ring_make

ALPHA1_RINGS = (-1, -3)
ALPHA2_RINGS = (-7, -2, -1, 2)


class TemplateError(ValueError):
    """Unsupported family, ring, weight or parameters."""


def default_weight(d: int, square: int) -> QuadInt:
    """A standard irrational weight with ``w * star(w) == square``."""
    r = ring_make(d)
    table = {
        (-1, 1): r(0, 1),
        (-3, 1): r(0, 1),
        (-1, 2): r(1, 1),
        (-2, 2): r(0, 1),
        (-7, 2): r(0, 1),
        (2, 2): r(0, 1),
    }
    if (d, square) not in table:
        raise TemplateError(f"no irrational element of absolute square {square} in O_K for d={d}")
    return table[(d, square)]


def check_weight(w: QuadInt, square: int) -> None:
    if w.is_rational() or w * w.star() != square:
        raise TemplateError(f"{w} is not an irrational element of absolute square {square}")


# -- shared pieces ----------------------------------------------------------------------
def _path(vs: Sequence[int], weight=1) -> list[tuple[int, int, object]]:
    return [(vs[i], vs[i + 1], weight) for i in range(len(vs) - 1)]


def _ladder(top: Sequence[int], bot: Sequence[int]) -> list[tuple[int, int, int]]:
    """Consecutive columns joined by the signed K_{2,2} of the cyclotomic ladders."""
    out = []
    for j in range(len(top) - 1):
        out += [(top[j], top[j + 1], 1), (top[j], bot[j + 1], 1), (bot[j], top[j + 1], -1), (bot[j], bot[j + 1], -1)]
    return out


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise TemplateError(msg)


# -- families ---------------------------------------------------------------------------
def build_P(ring: Ring, n: int, alpha2: QuadInt) -> HermitianGraph:
    """Path 0..n-1 with w(1, 0) = alpha2 and charge +1 on vertex n-1."""
    _need(n >= 3, "P needs n >= 3")
    edges = [(1, 0, alpha2)] + _path(range(1, n))
    return HermitianGraph.from_edges(ring, n, edges, {n - 1: 1})


def build_Q(ring: Ring, n: int, alpha1: QuadInt) -> HermitianGraph:
    """Uncharged cycle 0..n-1 with w(0, 1) = alpha1, all other weights 1."""
    _need(n >= 3, "Q needs n >= 3")
    edges = [(0, 1, alpha1)] + _path(range(1, n)) + [(n - 1, 0, 1)]
    return HermitianGraph.from_edges(ring, n, edges)


def build_C_even(ring: Ring, k: int, alpha2: QuadInt) -> HermitianGraph:
    """2k vertices: 0, ladder columns (2j-1, 2j) for j < k, then 2k-1."""
    _need(k >= 2, "C_even needs k >= 2")
    top = [2 * j - 1 for j in range(1, k)]
    bot = [2 * j for j in range(1, k)]
    end = 2 * k - 1
    edges = [(top[0], 0, alpha2), (bot[0], 0, alpha2)] + _ladder(top, bot)
    edges += [(bot[-1], end, -alpha2), (top[-1], end, alpha2)]
    return HermitianGraph.from_edges(ring, 2 * k, edges)


def build_C_odd(ring: Ring, k: int, alpha2: QuadInt) -> HermitianGraph:
    """2k+1 vertices: 0, then ladder columns (2j-1, 2j), the last one charged."""
    _need(k >= 1, "C_odd needs k >= 1")
    top = [2 * j - 1 for j in range(1, k + 1)]
    bot = [2 * j for j in range(1, k + 1)]
    edges = [(top[0], 0, alpha2), (bot[0], 0, alpha2)] + _ladder(top, bot) + [(top[-1], bot[-1], -1)]
    return HermitianGraph.from_edges(ring, 2 * k + 1, edges, {top[-1]: 1, bot[-1]: 1})


def build_T(ring: Ring, k: int, alpha1: QuadInt) -> HermitianGraph:
    """Toral ladder on columns (2j, 2j+1), j < k, closed up with alpha1 edges.

    The last column meets the first through w(top, top) = w(top, bot) = alpha1
    and w(bot, bot) = w(bot, top) = -alpha1.
    """
    _need(k >= 3, "T needs k >= 3")
    top = [2 * j for j in range(k)]
    bot = [2 * j + 1 for j in range(k)]
    edges = _ladder(top, bot)
    edges += [(top[-1], top[0], alpha1), (bot[-1], bot[0], -alpha1), (bot[-1], top[0], -alpha1), (top[-1], bot[0], alpha1)]
    return HermitianGraph.from_edges(ring, 2 * k, edges)


def build_X1(ring: Ring, n: int, alpha2: QuadInt) -> HermitianGraph:
    """Path 0..n-1 with w(1, 0) = w(n-2, n-1) = alpha2."""
    _need(n >= 3, "X1 needs n >= 3")
    edges = [(1, 0, alpha2)] + _path(range(1, n - 1)) + [(n - 2, n - 1, alpha2)]
    return HermitianGraph.from_edges(ring, n, edges)


def build_X2(ring: Ring, n: int, alpha2: QuadInt) -> HermitianGraph:
    """Vertex j-1 carries e_j: charged triangle e1, e2, e3 and a path e3..e_n."""
    _need(n >= 4, "X2 needs n >= 4")
    e = lambda j: j - 1  # noqa: E731
    edges = [(e(1), e(2), -1), (e(3), e(1), 1), (e(3), e(2), 1)]
    edges += _path([e(j) for j in range(3, n)])
    edges.append((e(n - 1), e(n), alpha2))
    return HermitianGraph.from_edges(ring, n, edges, {e(1): 1, e(2): 1})


def build_X3(ring: Ring, n: int, alpha2: QuadInt) -> HermitianGraph:
    """Path 0..n-3 with w(1, 0) = alpha2 and two leaves n-2, n-1 on n-3."""
    _need(n >= 5, "X3 needs n >= 5")
    edges = [(1, 0, alpha2)] + _path(range(1, n - 2)) + [(n - 3, n - 2, 1), (n - 3, n - 1, 1)]
    return HermitianGraph.from_edges(ring, n, edges)


def x4_index(s: int, t: int, side: str, j: int) -> int:
    """Vertex of l_j (side 'l') or r_j (side 'r'); r_t is l_s."""
    if side == "l" or j == t:
        return s if side == "r" else j
    return s + 1 + j


def build_X4(ring: Ring, s: int, t: int, alpha1: QuadInt) -> HermitianGraph:
    """s+t+1 vertices l_0..l_s, r_0..r_{t-1}, with r_t identified with l_s."""
    _need(s >= 2 and t >= 2, "X4 needs s, t >= 2")
    L = lambda j: x4_index(s, t, "l", j)  # noqa: E731
    R = lambda j: x4_index(s, t, "r", j)  # noqa: E731
    edges = _path([L(j) for j in range(s)])
    edges.append((L(s - 1), L(s), alpha1))
    edges += [(L(1), R(0), 1), (L(0), R(1), 1), (R(0), R(1), -1)]
    edges += _path([R(j) for j in range(1, t + 1)])
    return HermitianGraph.from_edges(ring, s + t + 1, edges)


def build_X5(ring: Ring) -> HermitianGraph:
    """4-cycle 0-1-3-2 with both edges at vertex 3 negative."""
    return HermitianGraph.from_edges(ring, 4, [(0, 1, 1), (2, 0, 1), (3, 1, -1), (3, 2, -1)])


def _star_tail(ring: Ring, charges: dict) -> HermitianGraph:
    # centre 1 with leaves 0 and 4, and a tail 1-2-3
    return HermitianGraph.from_edges(ring, 5, [(0, 1, 1), (2, 1, 1), (1, 4, 1), (3, 2, 1)], charges)


def build_X6(ring: Ring) -> HermitianGraph:
    return _star_tail(ring, {0: 1})


def build_X7(ring: Ring) -> HermitianGraph:
    return _star_tail(ring, {0: 1, 4: 1})


def build_X8(ring: Ring) -> HermitianGraph:
    return _star_tail(ring, {0: 1, 4: -1})


def build_X9(ring: Ring) -> HermitianGraph:
    """Path 0..6 with a leaf 7 on vertex 3."""
    return HermitianGraph.from_edges(ring, 8, _path(range(7)) + [(3, 7, 1)])


def build_X10(ring: Ring) -> HermitianGraph:
    """Path 0..8, charge +1 on vertex 1."""
    return HermitianGraph.from_edges(ring, 9, _path(range(9)), {1: 1})


def build_X11(ring: Ring, alpha2: QuadInt) -> HermitianGraph:
    """As X10 with w(7, 8) = alpha2."""
    return HermitianGraph.from_edges(ring, 9, _path(range(8)) + [(7, 8, alpha2)], {1: 1})


def build_X12(ring: Ring, alpha2: QuadInt) -> HermitianGraph:
    """Path 0..4 with w(1, 2) = alpha2."""
    return HermitianGraph.from_edges(ring, 5, [(0, 1, 1), (1, 2, alpha2), (2, 3, 1), (4, 3, 1)])


def build_X13(ring: Ring, alpha2: QuadInt) -> HermitianGraph:
    """X12 with charge +1 on vertex 0."""
    return HermitianGraph.from_edges(ring, 5, [(0, 1, 1), (1, 2, alpha2), (2, 3, 1), (4, 3, 1)], {0: 1})


def build_frakC8(ring: Ring, alpha1: QuadInt) -> HermitianGraph:
    """8-cycle, charge +1 on odd vertices, w(3, 4) = -alpha1, other weights 1."""
    edges = [(j, (j + 1) % 8, -alpha1 if j == 3 else 1) for j in range(8)]
    return HermitianGraph.from_edges(ring, 8, edges, {1: 1, 3: 1, 5: 1, 7: 1})


def build_Sec4_a(ring: Ring, alpha1: QuadInt) -> HermitianGraph:
    """Two 4-cycles sharing the edge a-b; vertices a..f are 0..5."""
    a, b, c, d, e, f = range(6)
    edges = [(a, b, 1), (b, d, 1), (d, c, 1), (c, a, -alpha1), (b, f, 1), (a, e, 1), (f, e, -1)]
    return HermitianGraph.from_edges(ring, 6, edges)


def build_Sec4_b(ring: Ring, alpha1: QuadInt) -> HermitianGraph:
    """A 4-cycle a-b-d-c with a pendant path d-e-f; vertices a..f are 0..5."""
    a, b, c, d, e, f = range(6)
    edges = [(a, b, 1), (b, d, 1), (d, c, -alpha1), (c, a, 1), (d, e, 1), (f, e, 1)]
    return HermitianGraph.from_edges(ring, 6, edges)


def build_Sec4_c(ring: Ring, alpha1: QuadInt) -> HermitianGraph:
    """Q_7 with weight -alpha1."""
    return build_Q(ring, 7, -alpha1)


@dataclass(frozen=True)
class Family:
    name: str
    builder: Callable
    nparams: int
    square: int | None
    rings: tuple[int, ...] | None  # None: any admissible ring


FAMILIES: dict[str, Family] = {
    f.name: f
    for f in (
        Family("P", build_P, 1, 2, ALPHA2_RINGS),
        Family("Q", build_Q, 1, 1, ALPHA1_RINGS),
        Family("C_even", build_C_even, 1, 2, ALPHA2_RINGS),
        Family("C_odd", build_C_odd, 1, 2, ALPHA2_RINGS),
        Family("T", build_T, 1, 1, ALPHA1_RINGS),
        Family("X1", build_X1, 1, 2, ALPHA2_RINGS),
        Family("X2", build_X2, 1, 2, ALPHA2_RINGS),
        Family("X3", build_X3, 1, 2, ALPHA2_RINGS),
        Family("X4", build_X4, 2, 1, ALPHA1_RINGS),
        Family("X5", build_X5, 0, None, None),
        Family("X6", build_X6, 0, None, None),
        Family("X7", build_X7, 0, None, None),
        Family("X8", build_X8, 0, None, None),
        Family("X9", build_X9, 0, None, None),
        Family("X10", build_X10, 0, None, None),
        Family("X11", build_X11, 0, 2, ALPHA2_RINGS),
        Family("X12", build_X12, 0, 2, ALPHA2_RINGS),
        Family("X13", build_X13, 0, 2, ALPHA2_RINGS),
        Family("frakC8", build_frakC8, 0, 1, (-3,)),
        Family("Sec4_a", build_Sec4_a, 0, 1, (-3,)),
        Family("Sec4_b", build_Sec4_b, 0, 1, (-3,)),
        Family("Sec4_c", build_Sec4_c, 0, 1, (-3,)),
    )
}

DEFAULT_RING = {"X5": -1, "X6": -1, "X7": -1, "X8": -1, "X9": -1, "X10": -1, "frakC8": -3, "Sec4_a": -3, "Sec4_b": -3, "Sec4_c": -3}


def build_template(family: str, params: Sequence[int] = (), d: int | None = None, weight: QuadInt | None = None) -> HermitianGraph:
    fam = FAMILIES.get(family)
    if fam is None:
        raise TemplateError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    if len(params) != fam.nparams:
        raise TemplateError(f"{family} takes {fam.nparams} parameter(s), got {len(params)}")
    if d is None:
        d = DEFAULT_RING.get(family, fam.rings[0] if fam.rings else -1)
    if fam.rings is not None and d not in fam.rings:
        raise TemplateError(f"{family} is not defined over d={d} (supported: {fam.rings})")
    ring = ring_make(d)
    args: list = list(params)
    if fam.square is not None:
        if weight is None:
            weight = default_weight(d, fam.square)
        if weight.ring != ring:
            raise TemplateError("weight belongs to a different ring")
        check_weight(weight, fam.square)
        args.append(weight)
    g = fam.builder(ring, *args)
    bad = validate(g)
    if bad is not None:
        raise TemplateError(f"{family}{tuple(params)} over d={d} is not a valid graph: {bad}")
    return g


# -- parameter syntax --------------------------------------------------------------------
def parse_params(text: str) -> list[tuple[int, ...]]:
    """``7`` -> [(7,)], ``2,3`` -> [(2, 3)], ``3..30`` -> [(3,), ..., (30,)],
    ``2..4,3`` -> ranges multiply out.  A ``FAMILY:`` prefix is ignored."""
    body = text.split(":", 1)[1] if ":" in text else text
    body = body.strip()
    if not body:
        return [()]
    axes: list[list[int]] = []
    for part in body.split(","):
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", part)
        if m is None:
            raise TemplateError(f"bad parameter syntax {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if hi < lo:
            raise TemplateError(f"empty range in {text!r}")
        axes.append(list(range(lo, hi + 1)))
    out: list[tuple[int, ...]] = [()]
    for ax in axes:
        out = [p + (x,) for p in out for x in ax]
    return out


def parse_family_params(text: str) -> tuple[str | None, list[tuple[int, ...]]]:
    fam = text.split(":", 1)[0] if ":" in text else None
    return fam, parse_params(text)


def parse_weight(d: int, text: str) -> QuadInt:
    return parse_qi(ring_make(d), text)


# -- certificates ----------------------------------------------------------------------------
def check_pq_determinant(family: str, n: int, d: int, weight: QuadInt | None = None) -> tuple[QuadInt, QuadInt]:
    """(det(A + 2I), predicted value) for P_n or Q_n."""
    if family not in ("P", "Q"):
        raise TemplateError("determinant certificate is defined for P and Q only")
    g = build_template(family, (n,), d, weight)
    r = g.ring
    shifted = g.shifted(2)
    value = det(shifted.w, r.one, r.zero)
    if family == "P":
        expected = r(4)
    else:
        a = weight if weight is not None else default_weight(d, 1)
        expected = r(2) - (a + a.star()) * (-1) ** n
    return value, expected


@lru_cache(maxsize=256)
def _char_poly(g: HermitianGraph):
    return char_poly(g)


def matrix_span(g: HermitianGraph) -> SpanClass:
    """Span class of g, the worst over embeddings for real rings."""
    p = _char_poly(g)
    if g.ring.d < 0:
        return span_class(p)
    order = [SpanClass.LESS, SpanClass.EXACT, SpanClass.GREATER]
    return max((span_class(p, s) for s in (1, -1)), key=order.index)


def matrix_cyclotomic(g: HermitianGraph) -> bool:
    p = _char_poly(g)
    return all(is_cyclotomic(p, s) for s in ((1,) if g.ring.d < 0 else (1, -1)))


def matrix_window(g: HermitianGraph) -> bool:
    p = _char_poly(g)
    return all(window_check(p, s) for s in ((1,) if g.ring.d < 0 else (1, -1)))


# Exact arithmetic in Q(sqrt3, i) for the eigenvectors of X4 over Z[w], d = -3.
@dataclass(frozen=True)
class Cx3:
    """a + b*sqrt3 + c*i + e*sqrt3*i with rational coordinates."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    e: Fraction = Fraction(0)

    @classmethod
    def lift(cls, x) -> "Cx3":
        if isinstance(x, Cx3):
            return x
        if isinstance(x, int):
            return cls(Fraction(x))
        if isinstance(x, QuadInt):
            d = x.ring.d
            if d == -1:
                return cls(Fraction(x.a), c=Fraction(x.b))
            if d == -3:
                # w = (1 + sqrt3*i)/2
                return cls(Fraction(x.a) + Fraction(x.b, 2), e=Fraction(x.b, 2))
            if d == 3:
                return cls(Fraction(x.a), Fraction(x.b))
        raise TypeError(f"cannot embed {x!r}")

    def __add__(self, o) -> "Cx3":
        o = Cx3.lift(o)
        return Cx3(self.a + o.a, self.b + o.b, self.c + o.c, self.e + o.e)

    __radd__ = __add__

    def __neg__(self) -> "Cx3":
        return Cx3(-self.a, -self.b, -self.c, -self.e)

    def __sub__(self, o) -> "Cx3":
        return self + (-Cx3.lift(o))

    def __mul__(self, o) -> "Cx3":
        o = Cx3.lift(o)
        # (p + q i)(r + s i) with p, q, r, s in Q(sqrt3)
        p, q, r, s = (self.a, self.b), (self.c, self.e), (o.a, o.b), (o.c, o.e)

        def m(x, y):
            return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

        pr, qs, ps, qr = m(p, r), m(q, s), m(p, s), m(q, r)
        return Cx3(pr[0] - qs[0], pr[1] - qs[1], ps[0] + qr[0], ps[1] + qr[1])

    __rmul__ = __mul__

    def __eq__(self, o) -> bool:
        try:
            o = Cx3.lift(o)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.c, self.e) == (o.a, o.b, o.c, o.e)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.e))


SQRT3 = Cx3(b=Fraction(1))
I = Cx3(c=Fraction(1))


def is_eigenvector(g: HermitianGraph, v: Sequence, lam: int) -> bool:
    """A v == lam v exactly, with v nonzero; entries may be ring elements or Cx3."""
    lift = (lambda x: x) if all(isinstance(x, QuadInt) for x in v) else Cx3.lift
    vv = [lift(x) for x in v]
    zero = lift(g.ring.zero)
    if all(x == zero for x in vv):
        return False
    for k in range(g.n):
        acc = zero
        for j in range(g.n):
            if g.w[k][j]:
                acc = acc + lift(g.w[k][j]) * vv[j]
        if acc != vv[k] * lam:
            return False
    return True


def _bipartite_flip(g: HermitianGraph, v: list) -> list:
    """Sign change on one side of a bipartite graph: a +2 vector becomes a -2 vector."""
    side = [None] * g.n
    side[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for x in g.neighbours(u):
            if side[x] is None:
                side[x] = 1 - side[u]
                stack.append(x)
    return [x if s == 0 else -x for x, s in zip(v, side)]


def span4_eigenvectors(family: str, params: Sequence[int], d: int | None = None, weight: QuadInt | None = None):
    """The graph and its stated eigenvectors for eigenvalues +2 and -2."""
    g = build_template(family, params, d, weight)
    r = g.ring
    fam = FAMILIES[family]
    a = weight if weight is not None else default_weight(r.d, fam.square)
    if family in ("X1", "X3"):
        (n,) = params
        two = r(2)
        if family == "X1":
            plus = [a.star()] + [two] * (n - 2) + [a.star()]
        else:
            plus = [a.star()] + [two] * (n - 3) + [r(1), r(1)]
        return g, {2: plus, -2: _bipartite_flip(g, plus)}
    if family == "X2":
        (n,) = params
        plus = [r(1), r(-1)] + [r(0)] * (n - 2)
        minus = [r(1), r(1)] + [r(2 * (-1) ** j) for j in range(3, n)] + [a.star() * (-1) ** n]
        return g, {2: plus, -2: minus}
    if family == "X4":
        s, t = params
        if r.d == -1:
            u, root = Cx3.lift(1), I  # the pair (1, i)
        else:
            u, root = SQRT3, I  # the pair (sqrt3, i)
        lp, lm = u + root, u - root
        L = lambda j: x4_index(s, t, "l", j)  # noqa: E731
        R = lambda j: x4_index(s, t, "r", j)  # noqa: E731
        plus: list = [None] * g.n
        minus: list = [None] * g.n
        for j in range(1, s):
            plus[L(j)] = lp
            minus[L(j)] = lp * (-1) ** (s - j)
        for j in range(1, t):
            plus[R(j)] = lm
            minus[R(j)] = lm * (-1) ** (t - j)
        plus[L(s)] = lm
        minus[L(s)] = lm
        plus[L(0)], plus[R(0)] = u, root
        sg = (-1) ** s
        if (s + t) % 2 == 0:
            minus[L(0)], minus[R(0)] = u * sg, root * sg
        else:
            minus[L(0)], minus[R(0)] = root * sg, u * sg
        return g, {2: plus, -2: minus}
    raise TemplateError("eigenvector certificates exist for X1, X2, X3 and X4 only")


def check_span4_eigenvectors(family: str, params: Sequence[int], d: int | None = None, weight: QuadInt | None = None) -> bool:
    g, vecs = span4_eigenvectors(family, params, d, weight)
    return all(is_eigenvector(g, v, lam) for lam, v in vecs.items())
