import numpy as np
import pytest
from hypothesis import given, strategies as st

from smallspan.charpoly import char_poly
from smallspan.equivalence import (
    EquivStore,
    bucket_key,
    equivalence_witness,
    equivalent,
    equivalent_to_rational,
    find_monomial,
    galois,
    poly_transform,
    rationalize,
    strong_equivalent,
    switch,
    transform,
)
from smallspan.matrix import HermitianGraph
from smallspan.ring import ring_make, torsion_units

from conftest import graphs, random_graph


def random_strong(rng, g, allow_sigma=True):
    """Apply a random permutation, random switchings and maybe the Galois map."""
    units = torsion_units(g.ring)
    h = g.permuted(list(rng.permutation(g.n)))
    for v in range(h.n):
        u = units[rng.integers(len(units))]
        if u != 1:
            h = switch(h, v, u)
    sigma = bool(allow_sigma and rng.integers(2))
    return (galois(h) if sigma else h), sigma


@given(graphs(max_n=6), st.integers(0, 2**32 - 1))
def test_switch_and_permutation_are_recognised(g, seed):
    rng = np.random.default_rng(seed)
    h, sigma = random_strong(rng, g)
    assert strong_equivalent(g, h)
    if not sigma:
        assert find_monomial(g, h) is not None


@given(graphs(max_n=6), st.integers(0, 2**32 - 1), st.sampled_from([1, -1]), st.integers(-3, 3))
def test_witness_reproduces_the_transform(g, seed, eps, c):
    rng = np.random.default_rng(seed)
    h, _ = random_strong(rng, g)
    h = transform(h, False, eps, c)
    w = equivalence_witness(g, h)
    assert w is not None
    sigma, e, cc = w
    assert strong_equivalent(transform(g, sigma, e, cc), h)
    assert bucket_key(g) == bucket_key(h)


@given(graphs(max_n=6), st.booleans(), st.sampled_from([1, -1]), st.integers(-3, 3))
def test_poly_transform_matches_direct(g, sigma, eps, c):
    assert poly_transform(char_poly(g), sigma, eps, c) == char_poly(transform(g, sigma, eps, c))


def test_inequivalent_graphs():
    path = HermitianGraph.from_edges(-1, 3, [(0, 1, 1), (1, 2, 1)])
    tri = HermitianGraph.from_edges(-1, 3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert not equivalent(path, tri)
    r = ring_make(-1)
    a = HermitianGraph.from_edges(r, 2, [(0, 1, r(1, 1))])
    b = HermitianGraph.from_edges(r, 2, [(0, 1, 1)])
    assert not equivalent(a, b)


def test_switch_rejects_non_units():
    g = HermitianGraph.from_edges(-1, 2, [(0, 1, 1)])
    with pytest.raises(ValueError):
        switch(g, 0, ring_make(-1)(1, 1))


def test_rationality():
    r = ring_make(-1)
    i = r(0, 1)
    # a 4-cycle whose weights multiply to 1 switches to an integer matrix
    c4 = HermitianGraph.from_edges(r, 4, [(0, 1, i), (1, 2, i), (2, 3, i), (3, 0, i)])
    assert equivalent_to_rational(c4)
    z = rationalize(c4)
    assert all(x.is_rational() for row in z.w for x in row)
    assert char_poly(z) == char_poly(c4)
    # product i around a triangle cannot be removed
    c3 = HermitianGraph.from_edges(r, 3, [(0, 1, i), (1, 2, 1), (2, 0, 1)])
    assert not equivalent_to_rational(c3)
    assert rationalize(c3) is None


def test_store_dedupes():
    rng = np.random.default_rng(7)
    base = [random_graph(rng, -3, 4) for _ in range(5)]
    store = EquivStore(ring_make(-3), 4)
    for g in base:
        store.add(g)
    size = len(store)
    for g in base:
        h, _ = random_strong(rng, g)
        idx, new, wit = store.insert(transform(h, False, -1, 2))
        assert not new
        s, e, c = wit
        assert strong_equivalent(transform(transform(h, False, -1, 2), s, e, c), store.reps[idx])
    assert len(store) == size
