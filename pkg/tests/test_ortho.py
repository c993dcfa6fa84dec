"""Contour-orthonormal bases, kernel polynomials, and the radius estimate."""

import numpy as np
import pytest

from juliapoly import (
    ConfigError,
    Poly,
    build_grid,
    build_orthobasis,
    conformal_radius_estimate,
    evaluate_basis,
    make_szego_state,
    map_approximant,
    p_norm,
    szego_eval,
    szego_kernel_partial,
    szego_polynomial,
)
from juliapoly.ortho import szego_values


def _basis_for(domains, name, n):
    dom = domains[name]
    # single-arc boundaries need extra panels to satisfy the 4x oversampling rule
    panels = 16 if dom.n_arcs > 1 else 32
    grid = build_grid(dom, panels, 16)
    return build_orthobasis(grid, dom.zeta, n)


def test_gram_residual_high_degree_all_domains(domains):
    for name in ("disk", "ellipse", "square", "lshape", "cusp"):
        basis = _basis_for(domains, name, 100)
        assert basis.gram_residual <= 1e-8, name


def test_recurrence_evaluation_matches_stored_node_values(domains):
    basis = _basis_for(domains, "square", 60)
    vals = evaluate_basis(basis, basis.grid.points)
    assert np.max(np.abs(vals - basis.values)) < 1e-12


def test_recurrence_evaluation_matches_coefficients_at_low_degree(domains, rng):
    basis = _basis_for(domains, "ellipse", 12)
    z = basis.grid.points[:: 37]
    vals = evaluate_basis(basis, z)
    for k in range(13):
        direct = Poly(basis.zeta, basis.coeffs[k, : k + 1])(z)
        assert np.max(np.abs(vals[:, k] - direct)) < 1e-11


def test_radius_estimates_nonincreasing_mass_nondecreasing(domains):
    state = make_szego_state(_basis_for(domains, "square", 48))
    rs = [conformal_radius_estimate(state, n) for n in range(49)]
    assert np.all(np.diff(rs) <= 1e-14)
    assert np.all(np.diff(state.mass_cum) >= -1e-16)
    # the two are exact duals: R_n = 1 / (2 pi * kernel mass)
    for n in (0, 7, 23, 48):
        assert rs[n] == pytest.approx(1.0 / (2.0 * np.pi * state.mass_cum[n]), rel=1e-10)


def test_disk_degeneracy(domains):
    state = make_szego_state(_basis_for(domains, "disk", 16))
    grid = state.basis.grid
    for n in (0, 1, 4, 16):
        err = p_norm(grid, np.ones(grid.size) - szego_values(state, n), 2.0)
        assert err <= 1e-9
        assert conformal_radius_estimate(state, n) == pytest.approx(1.0, abs=1e-10)


def test_kernel_reproduces_low_degree_polynomials(domains, rng):
    state = make_szego_state(_basis_for(domains, "square", 24))
    grid = state.basis.grid
    n = 24
    for _ in range(4):
        c = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        f = Poly(state.basis.zeta, c)
        fv = f(grid.points)
        kv = szego_kernel_partial(state, grid.points, n)
        inner = np.sum(fv * np.conj(kv) * grid.arclength_weights)
        assert abs(inner - f(state.basis.zeta)) <= 1e-7 * p_norm(grid, fv, 2.0)


def test_szego_polynomial_normalization_and_eval(domains):
    state = make_szego_state(_basis_for(domains, "square", 20))
    q = szego_polynomial(state, 20)
    assert abs(q(state.basis.zeta) - 1.0) < 1e-10
    z = state.basis.grid.points[:: 53]
    assert np.max(np.abs(szego_eval(state, z, 20) - q(z))) < 1e-10


def test_map_approximant_degree_and_anchor(domains):
    state = make_szego_state(_basis_for(domains, "ellipse", 6))
    q = szego_polynomial(state, 6)
    for p in (1, 2, 3):
        j = map_approximant(q, p)
        assert j.degree == 6 * p + 1
        assert abs(j(state.basis.zeta)) == 0.0


def test_oversampling_precondition(domains):
    grid = build_grid(domains["disk"], 4, 8)  # 32 nodes
    with pytest.raises(ConfigError):
        build_orthobasis(grid, domains["disk"].zeta, 20)


def test_degree_out_of_range_rejected(domains):
    state = make_szego_state(_basis_for(domains, "disk", 8))
    with pytest.raises(ConfigError):
        szego_polynomial(state, 9)
    with pytest.raises(ConfigError):
        conformal_radius_estimate(state, 9)
    with pytest.raises(ConfigError):
        evaluate_basis(state.basis, np.array([0.1 + 0.1j]), 9)
