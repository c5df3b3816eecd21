"""Level-by-level generation of connected small-span graphs up to equivalence.

Every class at level n+1 contains a connected class at level n, so level n+1
is obtained by adding one vertex to each stored level-n representative in
every possible way that keeps the span below 4, then moving the result into
the window [-2, 5/2) with a sign change and an integer shift.

Spectral tests run in floating point on batches with numpy.  Only decisions
that land within ``TOL`` of a boundary are redone exactly, and every stored
representative is re-verified with exact arithmetic.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import os
import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .charpoly import RingPoly, char_poly, fast_char_pairs
from .equivalence import (
    EquivStore,
    bucket_key,
    equivalent_to_rational,
    orbit_key,
    poly_transform,
    strong_equivalent,
    transform,
)
from .matrix import HermitianGraph, late_stage, loads, row_support_bound, structural_filter, validate
from .realroots import SpanClass, span_class, window_check
from .ring import ADMISSIBLE_D, QuadInt, elements_below, ring_make

log = logging.getLogger(__name__)

TOL = 1e-7
WIN_LO, WIN_HI = -2.0, 2.5
SHIFTS = tuple(sorted(range(-8, 9), key=lambda c: (abs(c), -c)))
CHUNK = 20000


@dataclass(frozen=True)
class GrowConfig:
    d: int
    max_n: int = 9
    embedding_check: str = "both"
    keep_noninteger_charpoly: bool = True
    workers: int = 1
    row_bound_pruning: bool = True
    structure_pruning: bool = True
    class_ceiling: int = 10**6

    def __post_init__(self) -> None:
        if self.d not in ADMISSIBLE_D:
            raise ValueError(f"d={self.d} is not admissible")
        if not 1 <= self.max_n <= 13:
            raise ValueError("max_n must lie in 1..13")
        if self.embedding_check not in ("single", "both"):
            raise ValueError("embedding_check must be 'single' or 'both'")

    @property
    def ring(self):
        return ring_make(self.d)

    def embeddings(self) -> tuple[int, ...]:
        return (1,) if self.d < 0 else (1, -1)

    def options(self) -> list[tuple[bool, int, int]]:
        """Normalisations (sigma, eps, c) in the fixed order they are tried."""
        sigmas = (False, True) if self.d > 0 and self.embedding_check == "single" else (False,)
        return [(s, e, c) for s in sigmas for e in (1, -1) for c in SHIFTS]

    def checked(self, sigma: bool) -> tuple[int, ...]:
        """Embeddings of the original matrix that must pass for a given sigma."""
        if self.d < 0:
            return (1,)
        if self.embedding_check == "both":
            return (1, -1)
        return (-1,) if sigma else (1,)


class CeilingExceeded(RuntimeError):
    pass


# -- exact verdicts (cached by polynomial) ---------------------------------------
@lru_cache(maxsize=200000)
def _exact_ok(d: int, pairs: tuple, emb: int) -> bool:
    ring = ring_make(d)
    p = RingPoly(ring, tuple(QuadInt(ring, a, b) for a, b in pairs))
    return span_class(p, emb) is SpanClass.LESS and window_check(p, emb)


def exact_small_span(p: RingPoly, embeddings) -> bool:
    """Window and span < 4 for each listed embedding of p, exactly."""
    return all(_exact_ok(p.ring.d, p.pairs(), e) for e in embeddings)


def normalise_exact(g: HermitianGraph, cfg: GrowConfig, p: RingPoly | None = None, options=None) -> HermitianGraph | None:
    """First normalisation of g that is small-span in the window, exact."""
    p = char_poly(g) if p is None else p
    for sigma, eps, c in cfg.options() if options is None else options:
        q = poly_transform(p, sigma, eps, c)
        if exact_small_span(q, cfg.checked(False)):
            h = transform(g, sigma, eps, c)
            if validate(h) is None:
                return h
    return None


def is_stored_shape(g: HermitianGraph, cfg: GrowConfig) -> bool:
    p = char_poly(g)
    return validate(g) is None and exact_small_span(p, cfg.checked(False))


@dataclass(frozen=True)
class Extension:
    """An extension E of a stored graph: ``graph`` is E moved into the window
    by ``used``; ``feasible`` lists every option (sigma, eps, c) that puts E
    into the window."""

    graph: HermitianGraph
    used: tuple
    feasible: tuple


# -- numeric helpers ---------------------------------------------------------------
def _embed_all(xs: list[QuadInt], s: int, complex_: bool) -> np.ndarray:
    return np.array([x.embed(s) for x in xs], dtype=complex if complex_ else float)


def _eig_extremes(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ev = np.linalg.eigvalsh(mats)
    return ev[:, 0], ev[:, -1]


def _window_status(lo: np.ndarray, hi: np.ndarray, eps: int, c: int, margin: float) -> np.ndarray:
    if eps == 1:
        a, b = lo + c, hi + c
    else:
        a, b = c - hi, c - lo
    return (a >= WIN_LO + margin) & (b < WIN_HI - margin)


@dataclass
class Extender:
    """Enumerates one-vertex extensions of graphs over one ring."""

    cfg: GrowConfig
    literal: bool = False
    options: list = field(init=False)
    weights: list = field(init=False)
    zero_idx: int = field(init=False)
    rep_mask: np.ndarray = field(init=False)
    wnum: dict = field(init=False)
    charge_pool: list = field(init=False)

    def __post_init__(self) -> None:
        ring = self.cfg.ring
        self.options = [(False, 1, 0)] if self.literal else self.cfg.options()
        self.weights = elements_below(ring, 2)
        self.zero_idx = next(i for i, x in enumerate(self.weights) if not x)
        self.rep_mask = np.array([bool(x) and x.key() == orbit_key(x) for x in self.weights])
        cx = ring.d < 0
        self.wnum = {s: _embed_all(self.weights, s, cx) for s in self.cfg.embeddings()}
        if ring.d < 0:
            self.charge_pool = [ring(a) for a in range(-8, 9)]
        else:
            bound = 7 if self.cfg.embedding_check == "both" else 11
            self.charge_pool = elements_below(ring, bound, real_only=True)

    # spectral interval of g in each embedding
    def _g_intervals(self, g: HermitianGraph) -> dict:
        out = {}
        for s in self.cfg.embeddings():
            ev = np.linalg.eigvalsh(g.numeric(s))
            out[s] = (float(ev[0]), float(ev[-1]))
        return out

    def _charges(self, g: HermitianGraph, iv: dict) -> list[QuadInt]:
        cfg = self.cfg
        out = []
        for x in self.charge_pool:
            ok_any = False
            ok_all = True
            for s in cfg.embeddings():
                lo, hi = iv[s]
                v = complex(x.embed(s)).real
                inside = hi - 4 - TOL < v < lo + 4 + TOL
                ok_any |= inside
                ok_all &= inside
            if cfg.d > 0 and cfg.embedding_check == "single":
                keep = ok_any
            else:
                keep = ok_all
            if keep:
                out.append(x)
        return out

    def _prefix_keep(self, lo: dict, hi: dict) -> np.ndarray:
        """Loose test that some normalisation could still succeed."""
        first = next(iter(lo.values()))
        keep = np.zeros(first.shape[0], dtype=bool)
        for sigma, eps, c in self.options:
            ok = np.ones_like(keep)
            for s in self.cfg.checked(sigma):
                ok &= ((hi[s] - lo[s]) < 4 + TOL) & _window_status(lo[s], hi[s], eps, c, -TOL)
            keep |= ok
        return keep

    def extensions(self, g: HermitianGraph) -> list["Extension"]:
        """Connected one-vertex extensions of g with span < 4, normalised.

        The new vertex is switched so that its first edge carries the
        smallest weight in its unit orbit; every other extension of g is a
        switching of one of these.
        """
        cfg = self.cfg
        n = g.n
        ring = g.ring
        embs = cfg.embeddings()
        cx = ring.d < 0
        iv = self._g_intervals(g)
        charges = self._charges(g, iv)
        if not charges:
            return []
        cnum = {s: _embed_all(charges, s, cx) for s in embs}
        anum = {s: g.numeric(s) for s in embs}
        nw = len(self.weights)
        limit = row_support_bound(cfg.d)
        use_rows = cfg.row_bound_pruning and late_stage(cfg.d, n + 1)
        room = np.array([g.degree(j) < limit for j in range(n)])

        ci = np.arange(len(charges))
        X = np.zeros((len(charges), 0), dtype=np.int16)
        anynz = np.zeros(len(charges), dtype=bool)
        nnz = np.zeros(len(charges), dtype=np.int16)
        final_lo = final_hi = None
        widx = np.arange(nw)
        for k in range(n):
            m = len(ci)
            if m == 0:
                return []
            ci2 = np.repeat(ci, nw)
            X2 = np.concatenate([np.repeat(X, nw, axis=0), np.tile(widx, m)[:, None].astype(np.int16)], axis=1)
            w_new = X2[:, -1]
            nz = w_new != self.zero_idx
            prev = np.repeat(anynz, nw)
            allowed = ~nz | prev | self.rep_mask[w_new]
            nnz2 = np.repeat(nnz, nw) + nz
            if use_rows:
                allowed &= ~nz | room[k]
                allowed &= nnz2 <= limit
            if k == n - 1:
                allowed &= prev | nz
            ci2, X2, prev, nz, nnz2 = ci2[allowed], X2[allowed], prev[allowed], nz[allowed], nnz2[allowed]
            size = k + 2
            lo_all = {s: np.empty(len(ci2)) for s in embs}
            hi_all = {s: np.empty(len(ci2)) for s in embs}
            for start in range(0, len(ci2), CHUNK):
                sl = slice(start, start + CHUNK)
                cnt = len(ci2[sl])
                for s in embs:
                    mats = np.zeros((cnt, size, size), dtype=complex if cx else float)
                    mats[:, 1:, 1:] = anum[s][: k + 1, : k + 1]
                    mats[:, 0, 0] = cnum[s][ci2[sl]]
                    row = self.wnum[s][X2[sl]]
                    mats[:, 0, 1:] = row
                    mats[:, 1:, 0] = np.conj(row) if cx else row
                    lo, hi = _eig_extremes(mats)
                    lo_all[s][sl] = np.minimum(lo, iv[s][0])
                    hi_all[s][sl] = np.maximum(hi, iv[s][1])
            keep = self._prefix_keep(lo_all, hi_all)
            ci, X, anynz, nnz = ci2[keep], X2[keep], (prev | nz)[keep], nnz2[keep]
            final_lo = {s: lo_all[s][keep] for s in embs}
            final_hi = {s: hi_all[s][keep] for s in embs}
        if n == 0 or final_lo is None:
            return []
        return self._finish(g, charges, ci, X, final_lo, final_hi)

    def _finish(self, g, charges, ci, X, lo, hi) -> list["Extension"]:
        cfg = self.cfg
        opts = self.options
        m = len(ci)
        clear = np.zeros((len(opts), m), dtype=bool)
        loose = np.zeros((len(opts), m), dtype=bool)
        for oi, (sigma, eps, c) in enumerate(opts):
            ok_c = np.ones(m, dtype=bool)
            ok_l = np.ones(m, dtype=bool)
            for s in cfg.checked(sigma):
                span = hi[s] - lo[s]
                ok_c &= (span < 4 - TOL) & _window_status(lo[s], hi[s], eps, c, TOL)
                ok_l &= (span < 4 + TOL) & _window_status(lo[s], hi[s], eps, c, -TOL)
            clear[oi] = ok_c
            loose[oi] = ok_l
        out = []
        for t in np.flatnonzero(loose.any(axis=0)):
            e = self._build(g, charges[ci[t]], X[t])
            p = None
            feasible = []
            for oi, opt in enumerate(opts):
                if clear[oi, t]:
                    feasible.append(opt)
                elif loose[oi, t]:
                    if p is None:
                        p = self._poly(e)
                    if exact_small_span(poly_transform(p, *opt), cfg.checked(False)):
                        feasible.append(opt)
            for opt in feasible:
                h = transform(e, *opt)
                if validate(h) is None:
                    out.append(Extension(h, opt, tuple(feasible)))
                    break
        return out

    @staticmethod
    def _poly(e: HermitianGraph) -> RingPoly:
        r = e.ring
        return RingPoly(r, tuple(QuadInt(r, a, b) for a, b in fast_char_pairs(e)))

    def _build(self, g: HermitianGraph, charge: QuadInt, xs) -> HermitianGraph:
        n = g.n
        m = [list(row) + [None] for row in g.w]
        m.append([None] * (n + 1))
        for j in range(n):
            x = self.weights[int(xs[j])]
            m[n][j] = x
            m[j][n] = x.star()
        m[n][n] = charge
        return HermitianGraph(g.ring, m)


# -- seeds and window nodes -----------------------------------------------------------
def seeds(cfg: GrowConfig) -> list[HermitianGraph]:
    """1x1 small-span matrices up to equivalence."""
    ring = cfg.ring
    store = EquivStore(ring, 1)
    cands = []
    for x in elements_below(ring, Fraction(5, 2), real_only=True):
        h = normalise_exact(HermitianGraph(ring, [[x]]), cfg)
        if h is not None:
            cands.append(h)
    for h in sorted(set(cands), key=lambda h: (bucket_key(h), h.dumps())):
        store.add(h)
    return list(store.reps)


def window_options(g: HermitianGraph, cfg: GrowConfig) -> list[tuple[int, int]]:
    """All (eps, c) with eps*g + cI small-span in the window, exactly."""
    spec = [np.linalg.eigvalsh(g.numeric(s)) for s in cfg.checked(False)]
    lo = np.array([e[0] for e in spec])
    hi = np.array([e[-1] for e in spec])
    p = None
    out = []
    for eps in (1, -1):
        for c in SHIFTS:
            # loose numeric prefilter, the exact test decides
            if not _window_status(lo, hi, eps, c, -TOL).all():
                continue
            p = char_poly(g) if p is None else p
            if exact_small_span(poly_transform(p, False, eps, c), cfg.checked(False)):
                if validate(transform(g, False, eps, c)) is None:
                    out.append((eps, c))
    return out


def window_nodes(g: HermitianGraph, cfg: GrowConfig) -> list[list[tuple[int, int]]]:
    """The distinct window forms eps*g + cI of g up to strong equivalence.

    Each node is the list of (eps, c) giving strongly equivalent forms.
    """
    nodes: list[list[tuple[int, int]]] = []
    forms: list[HermitianGraph] = []
    for eps, c in window_options(g, cfg):
        h = transform(g, False, eps, c)
        for k, f in enumerate(forms):
            if strong_equivalent(f, h):
                nodes[k].append((eps, c))
                break
        else:
            forms.append(h)
            nodes.append([(eps, c)])
    return nodes


def node_graph(g: HermitianGraph, node: list) -> HermitianGraph:
    eps, c = node[0]
    return transform(g, False, eps, c)


def passes_structure(g: HermitianGraph, cfg: GrowConfig) -> bool:
    """Whether some eps*g + cI has the structural properties of large
    small-span graphs (bounded entries, no weak triangles, row bound).

    Shifts outside the window count: the properties cannot hold for every
    shift of a charged graph, so they are a statement about some member of
    the class.
    """
    return any(structural_filter(transform(g, False, e, c), "late") is None for e in (1, -1) for c in SHIFTS)


def _node_index(nodes: list) -> dict:
    return {tuple(opt): k for k, node in enumerate(nodes) for opt in node}


# -- level lists ------------------------------------------------------------------------
@dataclass
class Level:
    """Classes at one size.

    ``parents[i]``: classes at n-1 having an extension in class i.
    ``nodes[i]``: window forms of class i, see :func:`window_nodes`.
    ``links[i]``: triples (parent class, parent node, node of i) such that the
    parent's window form is a literal principal submatrix of a window form
    of class i in that node.
    """

    n: int
    reps: list
    parents: list
    nodes: list
    links: list

    def __len__(self) -> int:
        return len(self.reps)


@dataclass
class LevelLists:
    cfg: GrowConfig
    levels: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> Level:
        if n not in self.levels:
            raise KeyError(f"level {n} has not been computed for d={self.cfg.d}")
        return self.levels[n]

    @property
    def top(self) -> int:
        return max(self.levels, default=0)

    def children(self, n: int) -> list[set]:
        """For each class at level n, the ids of its extension classes at n+1."""
        if n + 1 not in self.levels:
            raise KeyError(f"level {n + 1} is required to certify maximality at level {n}")
        kids = [set() for _ in self[n].reps]
        for cid, ps in enumerate(self[n + 1].parents):
            for p in ps:
                kids[p].add(cid)
        return kids

    def node_children(self, n: int) -> list[list[set]]:
        if n + 1 not in self.levels:
            raise KeyError(f"level {n + 1} is required to certify maximality at level {n}")
        kids = [[set() for _ in nodes] for nodes in self[n].nodes]
        for cid, links in enumerate(self[n + 1].links):
            for p, pn, cn in links:
                kids[p][pn].add((cid, cn))
        return kids


def _extend_batch(args):
    cfg, docs = args
    ext = Extender(cfg)
    out = []
    for pid, doc in docs:
        for x in ext.extensions(loads(doc)):
            out.append((pid, x.graph.dumps(), x.used, x.feasible))
    return out


def _links_supported(cfg: GrowConfig) -> bool:
    return not (cfg.d > 0 and cfg.embedding_check == "single")


def grow_level(cfg: GrowConfig, prev: Level) -> Level:
    ring = cfg.ring
    docs = [(pid, g.dumps()) for pid, g in enumerate(prev.reps)]
    if cfg.workers > 1 and len(docs) > 1:
        parts = [docs[i:: cfg.workers * 4] for i in range(cfg.workers * 4)]
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = [r for res in pool.map(_extend_batch, [(cfg, p) for p in parts if p]) for r in res]
    else:
        results = _extend_batch((cfg, docs))
    # deterministic regardless of how work was split
    results.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    graphs = {doc: None for _, doc, _, _ in results}
    for doc in graphs:
        graphs[doc] = loads(doc)
    keyed = sorted((bucket_key(g), doc) for doc, g in graphs.items())
    store = EquivStore(ring, prev.n + 1)
    where: dict[str, tuple] = {}
    for key, doc in keyed:
        cid, new, wit = store.insert(graphs[doc], key)
        where[doc] = (cid, wit)
        if new and len(store) > cfg.class_ceiling:
            raise CeilingExceeded(f"level {prev.n + 1} exceeds {cfg.class_ceiling} classes")
    for g in store.reps:
        if not is_stored_shape(g, cfg):
            raise AssertionError(f"exact re-check failed for {g.dumps()}")
    reps = list(store.reps)
    if cfg.structure_pruning and prev.n + 1 > 6:
        # the structural properties hold for every class beyond 6 vertices;
        # the test is equivalence invariant, so it can drop whole classes
        reps = [g for g in reps if passes_structure(g, cfg)]
    renum = {id(g): k for k, g in enumerate(reps)}
    remap = [renum.get(id(g)) for g in store.reps]
    parents: list[set] = [set() for _ in reps]
    nodes = [window_nodes(g, cfg) for g in reps]
    links: list[set] = [set() for _ in reps]
    node_of = [_node_index(ns) for ns in nodes]
    prev_node_of = [_node_index(ns) for ns in prev.nodes]
    for pid, doc, used, feasible in results:
        cid, (_, ew, cw) = where[doc]
        cid = remap[cid]
        if cid is None:
            continue
        parents[cid].add(pid)
        if not _links_supported(cfg):
            continue
        # rep ~ e0 * E + c0 for the raw extension E of the parent
        e0 = ew * used[1]
        c0 = ew * used[2] + cw
        for sig, eo, co in feasible:
            if sig:
                continue
            pn = prev_node_of[pid].get((eo, co))
            cn = node_of[cid].get((eo * e0, co - eo * e0 * c0))
            if pn is None or cn is None:
                raise AssertionError(f"inconsistent window forms for {doc}")
            links[cid].add((pid, pn, cn))
    return Level(
        prev.n + 1,
        reps,
        [sorted(p) for p in parents],
        nodes,
        [sorted(l) for l in links],
    )


def first_level(cfg: GrowConfig) -> Level:
    reps = seeds(cfg)
    return Level(1, reps, [[] for _ in reps], [window_nodes(g, cfg) for g in reps], [[] for _ in reps])


# -- persistence ------------------------------------------------------------------------
def level_dir(out: Path, d: int, n: int) -> Path:
    return Path(out) / f"d{d}" / f"n{n}"


def save_level(out: Path, cfg: GrowConfig, level: Level) -> None:
    final = level_dir(out, cfg.d, level.n)
    tmp = final.with_name(final.name + ".tmp")
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir(parents=True)
    with open(tmp / "classes.jsonl", "w") as fh:
        for g in level.reps:
            fh.write(g.dumps() + "\n")
    with open(tmp / "meta.jsonl", "w") as fh:
        for ps, ns, ls in zip(level.parents, level.nodes, level.links):
            doc = {"parents": list(ps), "nodes": [[list(o) for o in node] for node in ns], "links": [list(l) for l in ls]}
            fh.write(json.dumps(doc, separators=(",", ":")) + "\n")
    if final.exists():
        shutil.rmtree(final)
    os.replace(tmp, final)


def load_level(out: Path, d: int, n: int) -> Level:
    path = level_dir(out, d, n)
    reps = []
    with open(path / "classes.jsonl") as fh:
        for lineno, line in enumerate(fh, 1):
            reps.append(loads(line, f"{path / 'classes.jsonl'}:{lineno}"))
    parents, nodes, links = [], [], []
    with open(path / "meta.jsonl") as fh:
        for line in fh:
            doc = json.loads(line)
            parents.append(doc["parents"])
            nodes.append([[tuple(o) for o in node] for node in doc["nodes"]])
            links.append([tuple(l) for l in doc["links"]])
    if len(parents) != len(reps):
        raise ValueError(f"{path}: classes.jsonl and meta.jsonl disagree")
    return Level(n, reps, parents, nodes, links)


def load_levels(out: Path, cfg: GrowConfig) -> LevelLists:
    lists = LevelLists(cfg)
    n = 1
    while n <= cfg.max_n and (level_dir(out, cfg.d, n) / "meta.jsonl").exists():
        lists.levels[n] = load_level(out, cfg.d, n)
        n += 1
    return lists


def save_config(out: Path, cfg: GrowConfig) -> None:
    root = Path(out) / f"d{cfg.d}"
    root.mkdir(parents=True, exist_ok=True)
    doc = {k: v for k, v in asdict(cfg).items() if k != "workers"}
    with open(root / "config.json", "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)


def load_config(out: Path, d: int) -> GrowConfig:
    with open(Path(out) / f"d{d}" / "config.json") as fh:
        return GrowConfig(**json.load(fh))


def grow_all(cfg: GrowConfig, out: Path | None = None, resume: bool = False) -> LevelLists:
    """Populate levels 1..max_n, saving each finished level when out is given."""
    if out is not None:
        save_config(out, cfg)
    lists = load_levels(out, cfg) if (resume and out is not None) else LevelLists(cfg)
    if 1 not in lists.levels:
        lists.levels[1] = first_level(cfg)
        if out is not None:
            save_level(out, cfg, lists.levels[1])
    n = lists.top
    while n < cfg.max_n:
        level = grow_level(cfg, lists[n])
        log.info("d=%d n=%d classes=%d", cfg.d, level.n, len(level))
        lists.levels[level.n] = level
        if out is not None:
            save_level(out, cfg, level)
        n += 1
    if out is not None:
        write_summary(out, lists)
    return lists


# -- classification -------------------------------------------------------------------
def integer_flags(level: Level) -> list[bool]:
    return [all(b == 0 for _, b in fast_char_pairs(g)) for g in level.reps]


def _reach(lists: LevelLists, n: int) -> list[list[bool]]:
    """Per class and node at level n: does a chain of window supergraphs end
    at a matrix with integer char poly?"""
    top = lists.top
    if n >= top:
        raise KeyError(f"level {n + 1} is required to certify maximality at level {n}")
    reach = [[False] * len(ns) for ns in lists[top].nodes]
    for m in range(top - 1, n - 1, -1):
        ints = integer_flags(lists[m + 1])
        kids = lists.node_children(m)
        reach = [[any(ints[c] or reach[c][cn] for c, cn in node) for node in cls] for cls in kids]
    return reach


def maximal_nodes(lists: LevelLists, n: int) -> list[tuple[int, int]]:
    """(class, node) pairs at level n that are maximal small-span matrices.

    A window form is maximal when it has an integer char poly and is not a
    principal submatrix of a larger window matrix with integer char poly.
    Chains through non-integer intermediates are followed up to the top
    computed level.
    """
    if not _links_supported(lists.cfg):
        raise ValueError("maximality needs embedding_check='both' for real rings")
    ints = integer_flags(lists[n])
    reach = _reach(lists, n)
    return [(cid, k) for cid in range(len(ints)) if ints[cid] for k in range(len(reach[cid])) if not reach[cid][k]]


def maximal_nonrational(lists: LevelLists, n: int) -> tuple[list[HermitianGraph], int]:
    level = lists[n]
    rational = {}
    out = []
    for cid, k in maximal_nodes(lists, n):
        if cid not in rational:
            rational[cid] = equivalent_to_rational(level.reps[cid])
        if not rational[cid]:
            out.append(node_graph(level.reps[cid], level.nodes[cid][k]))
    return out, len(out)


def summary_rows(lists: LevelLists) -> list[dict]:
    rows = []
    for n in sorted(lists.levels):
        reps = lists[n].reps
        nonrat = sum(not equivalent_to_rational(g) for g in reps)
        maximal = maximal_nonrational(lists, n)[1] if n < lists.top and _links_supported(lists.cfg) else ""
        rows.append(
            {"d": lists.cfg.d, "n": n, "classes_total": len(reps), "classes_nonrational": nonrat, "maximal_nonrational": maximal}
        )
    return rows


SUMMARY_COLUMNS = ("d", "n", "classes_total", "classes_nonrational", "maximal_nonrational")


def write_summary(out: Path, lists: LevelLists) -> Path:
    path = Path(out) / f"d{lists.cfg.d}" / "summary.csv"
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        w.writeheader()
        w.writerows(summary_rows(lists))
    return path


def read_summary(out: Path, d: int) -> dict[int, dict]:
    path = Path(out) / f"d{d}" / "summary.csv"
    with open(path) as fh:
        return {int(r["n"]): r for r in csv.DictReader(fh)}
