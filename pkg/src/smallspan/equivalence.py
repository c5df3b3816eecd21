"""Switching, Galois action, (strong) equivalence and class stores.

Two graphs G, H are strongly equivalent when H = sigma(Q G Q*) for a Galois
automorphism sigma and a monomial unitary Q (permutation times a diagonal of
torsion units).  They are equivalent when H is strongly equivalent to
+-G + cI for a rational integer c.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .charpoly import RingPoly, fast_char_pairs
from .matrix import HermitianGraph
from .ring import QuadInt, Ring, torsion_units


def switch(g: HermitianGraph, v: int, u: QuadInt) -> HermitianGraph:
    """Multiply row v by u and column v by star(u)."""
    if u.ring != g.ring or not (u * u.star() == 1) or u not in torsion_units(g.ring):
        raise ValueError(f"{u} is not a switching unit of the ring")
    m = [list(row) for row in g.w]
    us = u.star()
    for j in range(g.n):
        if j != v:
            m[v][j] = u * m[v][j]
            m[j][v] = m[j][v] * us
    return HermitianGraph(g.ring, m)


def galois(g: HermitianGraph) -> HermitianGraph:
    return g.map(QuadInt.conj)


def transform(g: HermitianGraph, sigma: bool = False, eps: int = 1, c: int = 0) -> HermitianGraph:
    """eps * sigma(g) + c I."""
    out = galois(g) if sigma else g
    if eps == -1:
        out = out.negated()
    return out.shifted(c) if c else out


# -- invariants ---------------------------------------------------------------
def orbit_key(x: QuadInt) -> tuple[int, int]:
    """Smallest key in the orbit of x under multiplication by torsion units."""
    return min((u * x).key() for u in torsion_units(x.ring))


def vertex_invariant(g: HermitianGraph, v: int) -> tuple:
    """Data at v that survives permutation and switching."""
    row = g.w[v]
    nb = [j for j in range(g.n) if j != v and row[j]]
    return (
        (row[v].a, row[v].b),
        tuple(sorted(orbit_key(row[j]) for j in nb)),
        tuple(sorted(g.degree(j) for j in nb)),
    )


def trace(g: HermitianGraph) -> QuadInt:
    t = g.ring.zero
    for c in g.charges():
        t = t + c
    return t


def _trace_shift(t: QuadInt, n: int) -> int:
    """The integer c with rational part of (t + n c) in [0, n)."""
    u, _ = t.rational_parts()
    return -int((u // n))


def poly_transform(p: RingPoly, sigma: bool, eps: int, c: int) -> RingPoly:
    """Char poly of eps*sigma(A) + cI from the char poly of A."""
    r = p.ring
    coeffs = [x.conj() for x in p.coeffs] if sigma else list(p.coeffs)
    n = len(coeffs) - 1
    if eps == -1:
        coeffs = [x * (-1) ** ((i + n) % 2) for i, x in enumerate(coeffs)]
    if c:
        # q(x) = p(x - c)
        out = [r.zero]
        for a in reversed(coeffs):
            nxt = [r.zero] * (len(out) + 1)
            for i, t in enumerate(out):
                nxt[i + 1] = nxt[i + 1] + t
                nxt[i] = nxt[i] + t * (-c)
            nxt[0] = nxt[0] + a
            out = nxt
        coeffs = out[: n + 1]
    return RingPoly(r, tuple(coeffs))


def bucket_key(g: HermitianGraph, pairs: tuple | None = None) -> tuple:
    """Equivalence invariant: minimum over sigma and sign of a translated signature."""
    r = g.ring
    n = g.n
    if pairs is None:
        pairs = fast_char_pairs(g)
    base = RingPoly(r, tuple(QuadInt(r, a, b) for a, b in pairs))
    t0 = trace(g)
    best = None
    for sigma in (False, True):
        gs = galois(g) if sigma else g
        inv = [vertex_invariant(gs, v) for v in range(n)]
        ts = t0.conj() if sigma else t0
        for eps in (1, -1):
            c = _trace_shift(ts * eps, n)
            poly = poly_transform(base, sigma, eps, c).pairs()
            sig = []
            for (ch, edges, degs) in inv:
                a, b = ch
                q = QuadInt(r, a, b) * eps + c
                sig.append(((q.a, q.b), edges, degs))
            cand = (poly, tuple(sorted(sig)))
            if best is None or cand < best:
                best = cand
    return (r.d, n) + best


# -- strong equivalence ---------------------------------------------------------
def _bfs_order(g: HermitianGraph) -> tuple[list[int], list[int | None]]:
    n = g.n
    start_order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    seen = [False] * n
    order: list[int] = []
    parent: list[int | None] = [None] * n
    for s in start_order:
        if seen[s]:
            continue
        seen[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            nb = sorted(g.neighbours(v), key=lambda u: (-g.degree(u), u))
            for u in nb:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    q.append(u)
    return order, parent


def find_monomial(a: HermitianGraph, b: HermitianGraph) -> tuple[list[int], list[QuadInt]] | None:
    """pi, units with b[k][l] = u_k * a[pi k][pi l] * star(u_l), or None."""
    if a.ring != b.ring or a.n != b.n:
        return None
    n = a.n
    units = set(torsion_units(a.ring))
    inv_a = [vertex_invariant(a, v) for v in range(n)]
    inv_b = [vertex_invariant(b, v) for v in range(n)]
    if sorted(inv_a) != sorted(inv_b):
        return None
    cands = [[g for g in range(n) if inv_a[g] == inv_b[k]] for k in range(n)]
    order, parent = _bfs_order(b)
    pi: list[int] = [-1] * n
    us: list[QuadInt | None] = [None] * n
    used = [False] * n
    one = a.ring.one
    placed: list[int] = []

    def rec(t: int) -> bool:
        if t == n:
            return True
        k = order[t]
        p = parent[k]
        bk = b.w[k]
        for gv in cands[k]:
            if used[gv]:
                continue
            if p is None:
                u = one
            else:
                w = a.w[gv][pi[p]]
                if not w:
                    continue
                u = bk[p].divide(w * us[p].star())
                if u is None or u not in units:
                    continue
            ok = True
            ag = a.w[gv]
            for l in placed:
                if bk[l] != u * ag[pi[l]] * us[l].star():
                    ok = False
                    break
            if not ok:
                continue
            pi[k], us[k], used[gv] = gv, u, True
            placed.append(k)
            if rec(t + 1):
                return True
            placed.pop()
            used[gv] = False
        return False

    if rec(0):
        return pi, us  # type: ignore[return-value]
    return None


def strong_equivalent(g: HermitianGraph, h: HermitianGraph) -> bool:
    if g.ring != h.ring or g.n != h.n:
        return False
    return any(find_monomial(gs, h) is not None for gs in _galois_images(g))


def _galois_images(g: HermitianGraph) -> list[HermitianGraph]:
    gc = galois(g)
    return [g] if gc == g else [g, gc]


def equivalence_witness(g: HermitianGraph, h: HermitianGraph) -> tuple[bool, int, int] | None:
    """(sigma, eps, c) with h strongly equivalent ... to eps*sigma(g) + cI, or None.

    The shift c is pinned down by the trace, so no search over c is needed.
    """
    if g.ring != h.ring or g.n != h.n:
        return None
    n = g.n
    th = trace(h)
    tg = trace(g)
    for sigma in (False, True):
        gs = galois(g) if sigma else g
        ts = tg.conj() if sigma else tg
        if sigma and gs == g:
            continue
        for eps in (1, -1):
            diff = th - ts * eps
            if diff.b != 0 or diff.a % n:
                continue
            c = diff.a // n
            cand = transform(gs, False, eps, c)
            if find_monomial(cand, h) is not None:
                return sigma, eps, c
    return None


def equivalent(g: HermitianGraph, h: HermitianGraph) -> bool:
    return equivalence_witness(g, h) is not None


# -- rationality ---------------------------------------------------------------
def equivalent_to_rational(g: HermitianGraph) -> bool:
    """Whether some switching of g (or of its conjugate) has entries in Z."""
    if any(not c.is_rational() for c in g.charges()):
        return False
    units = torsion_units(g.ring)
    n = g.n
    us: list[QuadInt | None] = [None] * n
    for s in range(n):
        if us[s] is not None:
            continue
        us[s] = g.ring.one
        q = deque([s])
        while q:
            v = q.popleft()
            for j in g.neighbours(v):
                if us[j] is not None:
                    continue
                # edge j -> v becomes u_j * w[j][v] * star(u_v)
                y = g.w[j][v] * us[v].star()
                for u in units:
                    if (u * y).is_rational():
                        us[j] = u
                        break
                else:
                    return False
                q.append(j)
    for i, j in g.edges():
        if not (us[i] * g.w[i][j] * us[j].star()).is_rational():
            return False
    return True


def rationalize(g: HermitianGraph) -> HermitianGraph | None:
    """An explicitly switched integer form of g, when one exists."""
    if not equivalent_to_rational(g):
        return None
    units = torsion_units(g.ring)
    out = g
    n = g.n
    done = [False] * n
    for s in range(n):
        if done[s]:
            continue
        done[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            for j in out.neighbours(v):
                if done[j]:
                    continue
                y = out.w[j][v]
                for u in units:
                    if (u * y).is_rational():
                        out = switch(out, j, u) if u != 1 else out
                        break
                done[j] = True
                q.append(j)
    return out


# -- class store ------------------------------------------------------------------
@dataclass
class EquivStore:
    """Representatives of equivalence classes at one size over one ring."""

    ring: Ring
    n: int
    buckets: dict = field(default_factory=dict)
    reps: list = field(default_factory=list)
    keys: list = field(default_factory=list)

    def locate(self, g: HermitianGraph, key: tuple | None = None) -> tuple[int, tuple] | None:
        """(index, witness) where witness = (sigma, eps, c) maps g onto the
        stored representative: rep ~ eps*sigma(g) + cI."""
        key = bucket_key(g) if key is None else key
        for idx in self.buckets.get(key, ()):
            w = equivalence_witness(g, self.reps[idx])
            if w is not None:
                return idx, w
        return None

    def find(self, g: HermitianGraph, key: tuple | None = None) -> int | None:
        hit = self.locate(g, key)
        return None if hit is None else hit[0]

    def insert(self, g: HermitianGraph, key: tuple | None = None) -> tuple[int, bool, tuple]:
        """Class index, whether it is new, and the witness onto the representative."""
        if g.ring != self.ring or g.n != self.n:
            raise ValueError("graph does not belong to this store")
        key = bucket_key(g) if key is None else key
        hit = self.locate(g, key)
        if hit is not None:
            return hit[0], False, hit[1]
        idx = len(self.reps)
        self.reps.append(g)
        self.keys.append(key)
        self.buckets.setdefault(key, []).append(idx)
        return idx, True, (False, 1, 0)

    def add(self, g: HermitianGraph, key: tuple | None = None) -> tuple[int, bool]:
        """Index of g's class, inserting g as a new representative if needed."""
        idx, new, _ = self.insert(g, key)
        return idx, new

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self) -> Iterator[HermitianGraph]:
        return iter(self.reps)

    def extend(self, graphs: Iterable[HermitianGraph]) -> None:
        for g in graphs:
            self.add(g)
