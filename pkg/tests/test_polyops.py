"""Shifted-basis polynomial arithmetic and simultaneous root finding."""

import os
import subprocess
import sys

import numpy as np
import pytest

from juliapoly import ConfigError, Poly, find_roots, moments


def _random_poly(rng, degree, zeta=0.3 + 0.2j):
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    c[-1] += 2.0  # keep the leading coefficient well away from zero
    return Poly(zeta, c)


def test_power_and_eval_commute(rng):
    z = rng.standard_normal(50) + 1j * rng.standard_normal(50)
    for degree in (3, 8, 16, 32):
        q = _random_poly(rng, degree)
        for p in (1, 2, 3):
            lhs = q.power(p)(z)
            rhs = q(z) ** p
            assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-12)) < 1e-11


def test_roots_reconstruct_monic_coefficients(rng):
    for degree in (4, 12, 24, 32):
        q = _random_poly(rng, degree)
        zs = find_roots(q)
        assert np.all(zs.converged)
        monic = np.poly(zs.roots - q.zeta)[::-1]  # ascending in (z - zeta)
        want = q.coeffs / q.coeffs[-1]
        assert np.max(np.abs(monic - want)) < 1e-6


def test_roots_of_known_factorization():
    roots = np.array([1.0 + 0j, -0.5 + 0.5j, 0.25 - 1j, 2.0 + 0.1j])
    q = Poly(0.0, np.poly(roots)[::-1])
    zs = find_roots(q)
    assert np.all(zs.converged)
    assert np.max(np.abs(np.sort_complex(zs.roots) - np.sort_complex(roots))) < 1e-10


def test_antiderivative_inverts_derivative(rng):
    q = _random_poly(rng, 10)
    c = q.coeffs.copy()
    c[0] = 0.0  # antiderivative always anchors the constant term at zero
    q0 = Poly(q.zeta, c)
    back = q0.derivative().antiderivative()
    assert np.max(np.abs(back.coeffs - q0.coeffs)) < 1e-14


def test_antiderivative_vanishes_at_zeta(rng):
    q = _random_poly(rng, 7, zeta=1.0 - 0.5j)
    assert abs(q.antiderivative()(q.zeta)) == 0.0


def test_trimmed_drops_tiny_leading_coefficients():
    q = Poly(0.0, [1.0, 2.0, 1e-20])
    assert q.trimmed().degree == 1


def test_degree_cap_enforced():
    q = Poly(0.0, np.ones(3000))
    with pytest.raises(ConfigError):
        q.power(2)


def test_moments_normalization():
    pts = np.exp(2j * np.pi * np.arange(8) / 8)
    m = moments(pts, 4, 0.0, 1.0)
    # power sums of the 8th roots of unity vanish for k = 1..4
    assert np.max(np.abs(m)) < 1e-14
    with pytest.raises(ConfigError):
        moments(np.array([]), 3, 0.0, 1.0)
    with pytest.raises(ConfigError):
        moments(pts, 3, 0.0, -1.0)


def test_plain_numpy_kernel_path_matches(tmp_path):
    """The env-selected fallback kernels must reproduce the default roots."""
    script = (
        "import numpy as np\n"
        "from juliapoly import Poly, find_roots\n"
        "from juliapoly import _kernels\n"
        "rng = np.random.default_rng(7)\n"
        "c = rng.standard_normal(13) + 1j * rng.standard_normal(13)\n"
        "zs = find_roots(Poly(0.1j, c))\n"
        "assert not _kernels.USE_NUMBA\n"
        "np.save(r'%s', np.sort_complex(zs.roots))\n"
    )
    out = tmp_path / "roots.npy"
    env = dict(os.environ, JULIAPOLY_NO_NUMBA="1")
    subprocess.run([sys.executable, "-c", script % out], check=True, env=env)
    rng = np.random.default_rng(7)
    c = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    zs = find_roots(Poly(0.1j, c))
    got = np.load(out)
    assert np.max(np.abs(np.sort_complex(zs.roots) - got)) < 1e-10
