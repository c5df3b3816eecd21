import os
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from smallspan.matrix import HermitianGraph
from smallspan.ring import ADMISSIBLE_D, elements_below, ring_make

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = Path(__file__).resolve().parent / "fixtures"
DATA_DIR = Path(os.environ.get("SMALLSPAN_OUT", ROOT / "out"))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# -- strategies -------------------------------------------------------------------------
ds = st.sampled_from(ADMISSIBLE_D)


def elements(d, bound=3):
    r = ring_make(d)
    return st.tuples(st.integers(-bound, bound), st.integers(-bound, bound)).map(lambda t: r(*t))


@st.composite
def ring_pairs(draw, bound=5):
    d = draw(ds)
    return d, draw(elements(d, bound)), draw(elements(d, bound))


def random_graph(rng: np.random.Generator, d: int, n: int, density: float = 0.5) -> HermitianGraph:
    """Random Hermitian graph with entries inside the small-span entry bounds."""
    r = ring_make(d)
    charges = elements_below(r, Fraction(5, 2), real_only=True)
    edges = [x for x in elements_below(r, 2) if x]
    m = [[r.zero] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = charges[rng.integers(len(charges))]
        for j in range(i + 1, n):
            if rng.random() < density:
                x = edges[rng.integers(len(edges))]
                m[i][j], m[j][i] = x, x.star()
    return HermitianGraph(r, m)


@st.composite
def graphs(draw, max_n=6, d=None):
    d = draw(ds) if d is None else d
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    dens = draw(st.sampled_from([0.3, 0.6, 1.0]))
    return random_graph(np.random.default_rng(seed), d, n, dens)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR
