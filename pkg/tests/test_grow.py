import itertools
from fractions import Fraction

import numpy as np
import pytest

from smallspan.charpoly import char_poly
from smallspan.equivalence import transform
from smallspan.grow import (
    CeilingExceeded,
    Extender,
    GrowConfig,
    first_level,
    grow_all,
    grow_level,
    load_levels,
    maximal_nonrational,
    passes_structure,
    read_summary,
    window_nodes,
)
from smallspan.matrix import HermitianGraph, delete_vertex, is_connected, structural_filter, validate
from smallspan.realroots import SpanClass, span_class, window_check
from smallspan.ring import elements_below, ring_make, torsion_units


# -- brute-force oracle --------------------------------------------------------------------
def _small_window(m: np.ndarray) -> bool:
    ev = np.linalg.eigvalsh(m)
    return ev[0] >= -2 - 1e-9 and ev[-1] < 2.5 - 1e-9 and ev[-1] - ev[0] < 4 - 1e-9


def _canon(d, rows, units, n):
    """Smallest entry tuple over permutations, switchings, Galois, sign and shift."""
    r = ring_make(d)
    best = None
    for sigma in (False, True):
        for eps in (1, -1):
            for perm in itertools.permutations(range(n)):
                for us in itertools.product(units, repeat=n - 1):
                    us = (r.one,) + us
                    m = []
                    for i in range(n):
                        row = []
                        for j in range(n):
                            x = rows[perm[i]][perm[j]]
                            x = x.conj() if sigma else x
                            x = us[i] * x * us[j].star() * eps
                            row.append(x)
                        m.append(row)
                    c = min(m[i][i].a for i in range(n))
                    key = tuple((m[i][j].a - (c if i == j else 0), m[i][j].b) for i in range(n) for j in range(n))
                    if best is None or key < best:
                        best = key
    return best


def brute_classes(d: int, n: int) -> int:
    r = ring_make(d)
    charges = elements_below(r, Fraction(5, 2), real_only=True)
    edges = elements_below(r, 2)
    units = torsion_units(r)
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for ch in itertools.product(charges, repeat=n):
        for es in itertools.product(edges, repeat=len(pos)):
            m = [[r.zero] * n for _ in range(n)]
            for i, c in enumerate(ch):
                m[i][i] = c
            for (i, j), x in zip(pos, es):
                m[i][j], m[j][i] = x, x.star()
            g = HermitianGraph(r, m)
            if not is_connected(g):
                continue
            embs = (1,) if d < 0 else (1, -1)
            if not all(_small_window(g.numeric(s)) for s in embs):
                continue
            seen.add(_canon(d, m, units, n))
    return len(seen)


@pytest.mark.parametrize("d,n", [(-1, 1), (-1, 2), (-2, 2), (-2, 3), (-11, 3), (-3, 2), (2, 2), (5, 2)])
def test_growth_matches_brute_force(d, n):
    cfg = GrowConfig(d=d, max_n=n)
    lists = grow_all(cfg)
    assert len(lists[n]) == brute_classes(d, n)


def test_known_class_counts():
    lists = grow_all(GrowConfig(d=-1, max_n=3))
    assert [len(lists[n]) for n in (1, 2, 3)] == [1, 7, 21]


def test_stored_reps_are_window_small_span():
    lists = grow_all(GrowConfig(d=-7, max_n=4))
    for n in lists.levels:
        for g in lists[n].reps:
            p = char_poly(g)
            assert validate(g) is None and is_connected(g)
            assert window_check(p) and span_class(p) is SpanClass.LESS


def test_hereditary_under_deletion():
    lists = grow_all(GrowConfig(d=-3, max_n=4))
    for n in (3, 4):
        for g in lists[n].reps:
            for v in range(n):
                h = delete_vertex(g, v)
                assert span_class(char_poly(h)) is SpanClass.LESS


def test_determinism_across_workers(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    grow_all(GrowConfig(d=-11, max_n=4, workers=1), a)
    grow_all(GrowConfig(d=-11, max_n=4, workers=2), b)
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert files == sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes(), f


def test_resume_reproduces(tmp_path):
    out = tmp_path / "o"
    grow_all(GrowConfig(d=-2, max_n=3), out)
    first = (out / "d-2" / "n3" / "classes.jsonl").read_bytes()
    lists = grow_all(GrowConfig(d=-2, max_n=4), out, resume=True)
    assert (out / "d-2" / "n3" / "classes.jsonl").read_bytes() == first
    assert sorted(lists.levels) == [1, 2, 3, 4]
    assert read_summary(out, -2)[3]["maximal_nonrational"] == "5"
    again = load_levels(out, GrowConfig(d=-2, max_n=4))
    assert [len(again[n]) for n in again.levels] == [len(lists[n]) for n in lists.levels]


def test_ceiling():
    with pytest.raises(CeilingExceeded):
        grow_all(GrowConfig(d=-1, max_n=3, class_ceiling=5))


def test_maximal_needs_next_level():
    lists = grow_all(GrowConfig(d=-2, max_n=3))
    assert maximal_nonrational(lists, 2)[1] == 4
    with pytest.raises(KeyError):
        maximal_nonrational(lists, 3)


def test_window_nodes_are_window_forms():
    lists = grow_all(GrowConfig(d=-3, max_n=3))
    cfg = lists.cfg
    for g in lists[3].reps:
        for node in window_nodes(g, cfg):
            for eps, c in node:
                h = g.negated().shifted(c) if eps == -1 else g.shifted(c)
                assert window_check(char_poly(h))


def test_extensions_keep_parent_as_leading_block():
    cfg = GrowConfig(d=-1, max_n=3)
    lvl = first_level(cfg)
    nxt = grow_level(cfg, lvl)
    ext = Extender(cfg)
    for g in nxt.reps + lvl.reps:
        for x in ext.extensions(g):
            # the parent, moved by the same option, is the leading block
            parent = transform(g, *x.used)
            assert [list(row[: g.n]) for row in x.graph.w[: g.n]] == [list(r) for r in parent.w]
            assert x.used in x.feasible


def test_structure_pruning_drops_golden_charge():
    r = ring_make(5)
    cfg = GrowConfig(d=5, max_n=9)
    edges = [(i, i + 1, 1) for i in range(6)]
    path = HermitianGraph.from_edges(r, 7, edges)
    assert passes_structure(path, cfg)
    charged = HermitianGraph.from_edges(r, 7, edges, {3: r(0, 1)})
    # a charge of house (1+sqrt5)/2 survives every integer shift
    assert not passes_structure(charged, cfg)


def test_structure_is_existential_over_shifts():
    r = ring_make(-1)
    # triangle with a single charge: fails as given, passes after subtracting I
    g = HermitianGraph.from_edges(r, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], {0: 1})
    cfg = GrowConfig(d=-1, max_n=9)
    assert structural_filter(g, "late") is not None
    assert passes_structure(g, cfg)
