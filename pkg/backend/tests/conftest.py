import logging
import random

import pytest

from app.config import get_settings
from app.services.complexes import build_complex
from app.services.polyhedra import from_generators
from app.services.troppoly import TropicalPolynomial


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator so randomized property tests are reproducible"""
    return random.Random(20240517)


@pytest.fixture(autouse=True)
def clear_settings_cache():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def detach_log_handler():
    """Drop the stderr handler a CLI run installs; capsys closes its stream"""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() == "tropical":
            root.removeHandler(handler)


def rays_complex(apex, directions, weights=None):
    weights = weights or [1] * len(directions)
    cells = [(from_generators([apex], [d]), w) for d, w in zip(directions, weights)]
    return build_complex(cells)


@pytest.fixture
def tropical_line():
    """max{0, x, y}: three rays from the origin"""
    return rays_complex((0, 0), [(1, 1), (-1, 0), (0, -1)])


@pytest.fixture
def unbalanced_line():
    return rays_complex((0, 0), [(1, 1), (-1, 0), (0, -1)], [2, 1, 1])


@pytest.fixture
def two_lines():
    """Union of the coordinate axes: four rays from the origin"""
    return rays_complex((0, 0), [(1, 0), (-1, 0), (0, 1), (0, -1)])


@pytest.fixture
def two_disjoint_lines():
    """Two planar tropical lines in R^3, at heights 0 and 1"""
    directions = [(1, 1, 0), (-1, 0, 0), (0, -1, 0)]
    cells = [
        (from_generators([apex], [d]), 1)
        for apex in [(0, 0, 0), (0, 0, 1)]
        for d in directions
    ]
    return build_complex(cells)


@pytest.fixture
def balanced_two_cycle():
    """Three half-planes in R^3 glued along the z-axis"""
    cells = [
        (from_generators([(0, 0, 0)], [d, (0, 0, 1), (0, 0, -1)]), 1)
        for d in [(1, 0, 0), (0, 1, 0), (-1, -1, 0)]
    ]
    return build_complex(cells)


def poly(n, terms):
    """TropicalPolynomial from {exponent: coefficient}"""
    return TropicalPolynomial.from_terms(n, terms)


@pytest.fixture
def line_poly():
    return poly(2, {(0, 0): 0, (1, 0): 0, (0, 1): 0})


@pytest.fixture
def conic_poly():
    """Smooth conic: coefficients -(a^2 + ab + b^2) lift 2*simplex to a unimodular triangulation"""
    return poly(
        2,
        {(0, 0): 0, (1, 0): -1, (0, 1): -1, (2, 0): -4, (1, 1): -3, (0, 2): -4},
    )
