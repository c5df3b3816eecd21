"""Hermitian matrices over a quadratic integer ring, viewed as charged graphs."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ring import LESS, GREATER, QuadInt, Ring, house_cmp, ring_make

DIAG_BOUND = Fraction(5, 2)
EDGE_BOUND = Fraction(2)


class MatrixFormatError(ValueError):
    """A matrix document could not be parsed; message carries the location."""


@dataclass(frozen=True)
class Violation:
    row: int
    col: int
    reason: str

    def __str__(self) -> str:
        return f"entry ({self.row},{self.col}): {self.reason}"


class HermitianGraph:
    """An n x n Hermitian matrix over one ring.

    ``w[i][j]`` is the weight of the edge i -> j and ``w[i][i]`` the charge of
    vertex i.  Hermitian means ``w[i][j] == w[j][i].star()``; for real rings
    (d > 0) that is plain symmetry.
    """

    __slots__ = ("ring", "w", "_hash")

    def __init__(self, ring: Ring, w: Sequence[Sequence[QuadInt]]) -> None:
        self.ring = ring
        self.w = tuple(tuple(row) for row in w)
        self._hash = None

    @classmethod
    def from_pairs(cls, ring: Ring | int, rows: Iterable[Iterable[Sequence[int]]]) -> "HermitianGraph":
        if isinstance(ring, int):
            ring = ring_make(ring)
        return cls(ring, [[QuadInt(ring, int(a), int(b)) for a, b in row] for row in rows])

    @classmethod
    def from_ints(cls, ring: Ring | int, rows: Iterable[Iterable[int]]) -> "HermitianGraph":
        return cls.from_pairs(ring, [[(x, 0) for x in row] for row in rows])

    @classmethod
    def from_edges(
        cls,
        ring: Ring | int,
        n: int,
        edges: Iterable[tuple[int, int, QuadInt | int]],
        charges: dict[int, QuadInt | int] | None = None,
    ) -> "HermitianGraph":
        """Build from directed edge weights ``w(i, j)``; ``w(j, i)`` is the conjugate."""
        if isinstance(ring, int):
            ring = ring_make(ring)
        m = [[ring.zero] * n for _ in range(n)]
        for i, j, x in edges:
            x = x if isinstance(x, QuadInt) else ring(x)
            m[i][j] = x
            m[j][i] = x.star()
        for v, c in (charges or {}).items():
            m[v][v] = c if isinstance(c, QuadInt) else ring(c)
        return cls(ring, m)

    @property
    def n(self) -> int:
        return len(self.w)

    def __getitem__(self, ij: tuple[int, int]) -> QuadInt:
        i, j = ij
        return self.w[i][j]

    def charges(self) -> list[QuadInt]:
        return [self.w[i][i] for i in range(self.n)]

    def pairs(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        return tuple(tuple((x.a, x.b) for x in row) for row in self.w)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HermitianGraph)
            and self.ring.d == other.ring.d
            and self.pairs() == other.pairs()
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.d, self.pairs()))
        return self._hash

    def __repr__(self) -> str:
        return f"HermitianGraph(d={self.ring.d}, n={self.n}, {self.pairs()})"

    def neighbours(self, v: int) -> list[int]:
        row = self.w[v]
        return [j for j in range(self.n) if j != v and row[j]]

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.w[i][j]]

    def is_integer_matrix(self) -> bool:
        return all(x.b == 0 for row in self.w for x in row)

    def numeric(self, sign: int = 1) -> np.ndarray:
        """The matrix under the embedding sqrt(d) -> sign*sqrt(d)."""
        om = self.ring.omega_value(sign)
        dtype = complex if self.ring.d < 0 else float
        a = np.array([[x.a for x in row] for row in self.w], dtype=float)
        b = np.array([[x.b for x in row] for row in self.w], dtype=float)
        return (a + b * om).astype(dtype)

    # -- transformations --------------------------------------------------
    def map(self, f) -> "HermitianGraph":
        return HermitianGraph(self.ring, [[f(x) for x in row] for row in self.w])

    def permuted(self, order: Sequence[int]) -> "HermitianGraph":
        """New graph whose vertex k is old vertex ``order[k]``."""
        return HermitianGraph(self.ring, [[self.w[i][j] for j in order] for i in order])

    def shifted(self, c: int) -> "HermitianGraph":
        m = [list(row) for row in self.w]
        for i in range(self.n):
            m[i][i] = m[i][i] + c
        return HermitianGraph(self.ring, m)

    def negated(self) -> "HermitianGraph":
        return self.map(lambda x: -x)

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {"d": self.ring.d, "n": self.n, "entries": [[[x.a, x.b] for x in row] for row in self.w]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def loads(text: str, source: str = "<string>") -> HermitianGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{source}: line {exc.lineno} col {exc.colno}: {exc.msg}") from None
    return from_dict(doc, source)


def from_dict(doc: dict, source: str = "<string>") -> HermitianGraph:
    if not isinstance(doc, dict) or not {"d", "n", "entries"} <= doc.keys():
        raise MatrixFormatError(f"{source}: expected keys d, n, entries")
    try:
        ring = ring_make(int(doc["d"]))
    except ValueError as exc:
        raise MatrixFormatError(f"{source}: {exc}") from None
    n, rows = doc["n"], doc["entries"]
    if not isinstance(n, int) or n < 1 or len(rows) != n:
        raise MatrixFormatError(f"{source}: n={n!r} does not match {len(rows)} rows")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MatrixFormatError(f"{source}: row {i} has {len(row)} entries, expected {n}")
        for j, e in enumerate(row):
            if not (isinstance(e, list) and len(e) == 2 and all(isinstance(t, int) for t in e)):
                raise MatrixFormatError(f"{source}: entry ({i},{j}) is not an [a, b] integer pair")
    g = HermitianGraph.from_pairs(ring, rows)
    for i in range(n):
        for j in range(i, n):
            if g.w[i][j] != g.w[j][i].star():
                raise MatrixFormatError(f"{source}: entry ({i},{j}) breaks Hermitian symmetry")
    return g


def load(path) -> HermitianGraph:
    with open(path) as fh:
        return loads(fh.read(), str(path))


def dump(g: HermitianGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(g.dumps() + "\n")


# -- checks -------------------------------------------------------------------
def validate(g: HermitianGraph) -> Violation | None:
    """First violated invariant, or None when the graph is well formed."""
    star_is_conj = g.ring.d < 0
    for i in range(g.n):
        c = g.w[i][i]
        if star_is_conj and c.b != 0:
            return Violation(i, i, "charge is not real")
        if house_cmp(c, DIAG_BOUND) != LESS:
            return Violation(i, i, "charge has house >= 5/2")
        for j in range(i + 1, g.n):
            x = g.w[i][j]
            if x.ring.d != g.ring.d:
                return Violation(i, j, "entry from another ring")
            if x != g.w[j][i].star():
                return Violation(i, j, "not Hermitian")
            if house_cmp(x, EDGE_BOUND) != LESS:
                return Violation(i, j, "off-diagonal house >= 2")
    return None


def delete_vertex(g: HermitianGraph, v: int) -> HermitianGraph:
    if g.n < 2:
        raise ValueError("cannot delete the only vertex")
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    keep = [i for i in range(g.n) if i != v]
    return g.permuted(keep)


def induced(g: HermitianGraph, vertices: Sequence[int]) -> HermitianGraph:
    return g.permuted(list(vertices))


def is_connected(g: HermitianGraph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.neighbours(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def row_support_bound(d: int) -> int:
    return 4 if d == -3 else 3


def late_stage(d: int, n: int) -> bool:
    """Whether a graph on n vertices is past the exhaustively searched sizes."""
    return n > (6 if d == -3 else 5)


def _edge_gt_one(x: QuadInt) -> bool:
    return house_cmp(x, 1) == GREATER


def structural_filter(g: HermitianGraph, stage: str = "late") -> str | None:
    """None if g passes, otherwise the name of the failed property.

    ``early`` checks only the entry bounds.  ``late`` adds the five
    structural properties of small-span graphs on more than six vertices and
    the per-row neighbour bound.
    """
    if stage not in ("early", "late"):
        raise ValueError(f"unknown stage {stage!r}")
    bad = validate(g)
    if bad is not None:
        return f"entry bounds: {bad}"
    if stage == "early":
        return None
    n = g.n
    w = g.w
    charged = [bool(w[i][i]) for i in range(n)]
    for i in range(n):
        if house_cmp(w[i][i], 1) == GREATER:
            return "property 2: charge with house > 1"
    big_edge = False
    for i, j in g.edges():
        if _edge_gt_one(w[i][j]):
            big_edge = True
            if charged[i] or charged[j]:
                return "property 5: charged vertex on an edge of house > 1"
    nbrs = [set(g.neighbours(i)) for i in range(n)]
    for i in range(n):
        for j in nbrs[i]:
            if j <= i:
                continue
            for k in nbrs[i] & nbrs[j]:
                if k <= j:
                    continue
                if big_edge:
                    return "property 4: triangle in a graph with an edge of house > 1"
                if charged[i] + charged[j] + charged[k] < 2:
                    return "property 3: triangle with fewer than 2 charges"
    limit = row_support_bound(g.ring.d)
    for i in range(n):
        if len(nbrs[i]) > limit:
            return f"row support: vertex {i} has {len(nbrs[i])} neighbours > {limit}"
    return None
