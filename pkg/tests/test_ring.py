import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from smallspan.ring import (
    ADMISSIBLE_D,
    EQUAL,
    GREATER,
    LESS,
    elements_below,
    house,
    house_cmp,
    parse_qi,
    ring_make,
    torsion_units,
)

from conftest import ring_pairs


@given(ring_pairs())
def test_arithmetic_matches_embedding(t):
    d, x, y = t
    for s in (1, -1):
        for got, want in [
            ((x + y).embed(s), x.embed(s) + y.embed(s)),
            ((x - y).embed(s), x.embed(s) - y.embed(s)),
            ((x * y).embed(s), x.embed(s) * y.embed(s)),
        ]:
            assert abs(got - want) < 1e-6


@given(ring_pairs())
def test_conj_is_ring_automorphism(t):
    _, x, y = t
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x
    assert (x * y).norm() == x.norm() * y.norm()


@given(ring_pairs())
def test_star_is_complex_conjugation(t):
    d, x, _ = t
    z = x.embed(1)
    assert abs(complex(x.star().embed(1)) - complex(z).conjugate()) < 1e-9


@given(ring_pairs(bound=40))
def test_format_parse_roundtrip(t):
    d, x, _ = t
    assert parse_qi(x.ring, str(x)) == x


@pytest.mark.parametrize("text", ["", "w+1", "1+*w", "abc", "1.5"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_qi(ring_make(-1), text)


def test_string_forms():
    r = ring_make(-3)
    assert str(r(1, 1)) == "1+w"
    assert str(r(0, -1)) == "-w"
    assert str(r(2, -3)) == "2-3*w"


@pytest.mark.parametrize("d,count", [(-1, 4), (-3, 6), (-2, 2), (-7, 2), (-11, 2), (2, 2), (3, 2), (5, 2), (6, 2)])
def test_torsion_units(d, count):
    us = torsion_units(ring_make(d))
    assert len(us) == count
    assert all(u * u.star() == 1 for u in us)


@pytest.mark.parametrize("d", ADMISSIBLE_D)
def test_elements_below_is_exactly_the_house_ball(d):
    r = ring_make(d)
    got = set(elements_below(r, 2))
    # independent float scan over a generous box
    want = set()
    for a in range(-12, 13):
        for b in range(-12, 13):
            x = r(a, b)
            if house(x) < 2 - 1e-9:
                want.add(x)
            elif abs(house(x) - 2) < 1e-9:
                assert house_cmp(x, 2) == EQUAL
    assert got == want


def test_house_cmp_boundaries():
    r = ring_make(2)
    sqrt2 = r(0, 1)
    assert house_cmp(sqrt2, Fraction(3, 2)) == LESS
    assert house_cmp(r(1, 1), 2) == GREATER  # 1 + sqrt2
    assert house_cmp(r(-1, 1), 1) == GREATER  # sqrt2 - 1 has conjugate -1 - sqrt2
    assert house_cmp(r(1, 0), 1) == EQUAL
    g = ring_make(-1)
    assert house_cmp(g(1, 1), 2) == LESS
    assert house_cmp(g(2, 0), 2) == EQUAL


def test_house_cmp_uses_both_embeddings():
    r = ring_make(5)
    golden = r(0, 1)  # (1 + sqrt5)/2 ~ 1.618, conjugate ~ -0.618
    assert house_cmp(golden, Fraction(8, 5)) == GREATER
    assert house_cmp(golden, Fraction(33, 20)) == LESS


def test_rejects_non_squarefree():
    with pytest.raises(ValueError):
        ring_make(4)
