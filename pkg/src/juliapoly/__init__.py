"""Numerical toolkit for boundary-extremal polynomial conformal mapping.

Builds the constrained extremal polynomials of the Smirnov boundary p-norm
problem on piecewise-analytic Jordan domains, integrates them into
polynomial approximants of the conformal map onto a disk, and provides the
oracles and experiment harness used to measure convergence rates,
leading-coefficient growth, and zero distributions.
"""

from .errors import ConfigError, NumericalError
from .extremal import (
    ExtremalProblem,
    ExtremalSolution,
    build_constrained_basis,
    evaluate_constrained_basis,
    make_problem,
    optimality_check,
    solve_best_approx,
    solve_min_norm,
    solve_problem,
    solve_unconstrained,
)
from .experiments import (
    FitResult,
    RateConfig,
    RateRow,
    SweepResult,
    fit_power_law,
    fit_stretched_exp,
    leading_coeff_report,
    run_rate_sweep,
    zero_report,
)
from .geom import ArcSpec, CornerInfo, DomainSpec, boundary_point, build_domain, min_exterior_angle
from .oracle import (
    EquilibriumOracle,
    ReferenceMap,
    SelfReference,
    corner_reference,
    leja_equilibrium,
    make_reference,
    phi_prime_power,
)
from .ortho import (
    OrthoBasis,
    SzegoState,
    build_orthobasis,
    conformal_radius_estimate,
    evaluate_basis,
    make_szego_state,
    map_approximant,
    szego_eval,
    szego_kernel_partial,
    szego_polynomial,
)
from .polyops import Poly, ZeroSet, find_roots, moments
from .quad import QuadratureGrid, build_grid, integrate, p_norm

__version__ = "0.1.0"
