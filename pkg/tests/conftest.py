"""Shared domain descriptions and grids for the test suite."""

import numpy as np
import pytest

from juliapoly import build_domain, build_grid

DISK = {
    "kind": "disk",
    "params": {"radius": 1.0},
    "zeta": [0.0, 0.0],
    "name": "unit-disk",
}

ELLIPSE = {
    "kind": "polyimage",
    "params": {"coeffs": [[0.25, 0.0]]},
    "zeta": [0.0, 0.0],
    "name": "ellipse-like",
}

SQUARE = {
    "kind": "polygon",
    "params": {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
    "zeta": [0.5, 0.5],
    "name": "unit-square",
}

LSHAPE = {
    "kind": "polygon",
    "params": {"vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]},
    "zeta": [0.5, 0.5],
    "name": "l-shape",
}

CUSP = {
    "kind": "cusp",
    "params": {"height": 0.35, "exponent": 2.0},
    "zeta": [0.5, 0.0],
    "name": "cusp",
}

ALL_DESCS = {
    "disk": DISK,
    "ellipse": ELLIPSE,
    "square": SQUARE,
    "lshape": LSHAPE,
    "cusp": CUSP,
}


@pytest.fixture(scope="session")
def domains():
    return {name: build_domain(desc) for name, desc in ALL_DESCS.items()}


@pytest.fixture(scope="session")
def grids(domains):
    return {name: build_grid(dom) for name, dom in domains.items()}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
