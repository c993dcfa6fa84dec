"""Constrained boundary Lp minimization via iteratively reweighted least squares.

Two problems share one solver core: the minimal-norm polynomial
(minimize |P|_p subject to P(zeta) = 1) and the best approximation of a
target boundary function under the same constraint.  The constraint is
structural: solutions are 1 + span{e_k}, where the e_k are an Arnoldi
orthonormalization of (z - zeta)^k, k >= 1, so every e_k vanishes at zeta
and the constraint can never drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, NumericalError
from .ortho import build_orthobasis
from .polyops import Poly
from .quad import QuadratureGrid

MAX_ITER = 200
OBJ_RTOL = 1e-10
EPS_REL = 1e-10


@dataclass(frozen=True)
class ConstrainedBasis:
    """Orthonormal basis e_1..e_n of the zeta-vanishing polynomial subspace."""

    grid: QuadratureGrid
    zeta: complex
    n: int
    values: np.ndarray  # (nodes, n); column k-1 holds e_k at the grid nodes
    coeffs: np.ndarray  # (n, n+1); row k-1 holds shifted-basis coeffs of e_k
    hess: np.ndarray  # recurrence projections; row k-1 holds <v, e_j> for j < k
    norms: np.ndarray  # recurrence normalizations


def evaluate_constrained_basis(basis: ConstrainedBasis, z, n: int | None = None) -> np.ndarray:
    """e_1..e_n at arbitrary points by re-running the stored recurrence."""
    n = basis.n if n is None else int(n)
    if n > basis.n:
        raise ConfigError(f"degree {n} exceeds basis degree {basis.n}")
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    u = zz - basis.zeta
    out = np.zeros((zz.size, n), dtype=complex)
    prev = np.ones(zz.size, dtype=complex)
    for k in range(1, n + 1):
        v = u * prev - out[:, : k - 1] @ basis.hess[k - 1, : k - 1]
        out[:, k - 1] = v / basis.norms[k - 1]
        prev = out[:, k - 1]
    return out


def build_constrained_basis(grid: QuadratureGrid, zeta: complex, n: int) -> ConstrainedBasis:
    if n < 0:
        raise ConfigError("degree must be >= 0")
    npts = grid.size
    if n + 1 > npts // 4:
        raise ConfigError(f"degree {n} needs at least {4 * (n + 1)} nodes, grid has {npts}")
    w = grid.arclength_weights
    u = grid.points - zeta
    values = np.zeros((npts, n), dtype=complex)
    coeffs = np.zeros((n, n + 1), dtype=complex)
    hess = np.zeros((n, n), dtype=complex)
    norms = np.ones(max(n, 1))
    prev_vals = np.ones(npts, dtype=complex)
    prev_c = np.zeros(n + 1, dtype=complex)
    prev_c[0] = 1.0
    for k in range(1, n + 1):
        v = u * prev_vals
        cv = np.zeros(n + 1, dtype=complex)
        cv[1:] = prev_c[:-1]
        scale = np.sqrt(np.sum(np.abs(v) ** 2 * w).real)
        for _ in range(2):
            h = values[:, : k - 1].conj().T @ (w * v)
            v = v - values[:, : k - 1] @ h
            cv = cv - h @ coeffs[: k - 1]
            hess[k - 1, : k - 1] += h
        nrm = np.sqrt(np.sum(np.abs(v) ** 2 * w).real)
        if nrm < 1e-13 * scale:
            raise NumericalError("constrained-basis", f"breakdown at degree {k}")
        values[:, k - 1] = v / nrm
        coeffs[k - 1] = cv / nrm
        norms[k - 1] = nrm
        prev_vals, prev_c = values[:, k - 1], coeffs[k - 1]
    return ConstrainedBasis(grid, zeta, n, values, coeffs, hess, norms)


@dataclass(frozen=True)
class ExtremalProblem:
    grid: QuadratureGrid
    zeta: complex
    n: int
    p: float
    target_values: Optional[np.ndarray]  # None for the minimal-norm problem
    basis: ConstrainedBasis


@dataclass(frozen=True)
class ExtremalSolution:
    q: Poly
    achieved_norm: float
    iterations: int
    stationarity: float
    leading_coeff: complex
    coeffs_in_basis: np.ndarray


def make_problem(
    grid: QuadratureGrid,
    zeta: complex,
    n: int,
    p: float,
    target=None,
    basis: Optional[ConstrainedBasis] = None,
) -> ExtremalProblem:
    if p < 1.0:
        raise ConfigError("solver handles p >= 1 only (objective convexity)")
    if basis is None:
        basis = build_constrained_basis(grid, zeta, n)
    elif basis.n < n:
        raise ConfigError("supplied basis has insufficient degree")
    tv = None if target is None else np.asarray(target, dtype=complex)
    if tv is not None and tv.shape != grid.points.shape:
        raise ConfigError("target length mismatch")
    return ExtremalProblem(grid, zeta, n, float(p), tv, basis)


def _objective(problem: ExtremalProblem, c: np.ndarray) -> float:
    r = _residual(problem, c)
    w = problem.grid.arclength_weights
    return float(np.sum(np.abs(r) ** problem.p * w) ** (1.0 / problem.p))


def _residual(problem: ExtremalProblem, c: np.ndarray) -> np.ndarray:
    # r = P at nodes (minimal-norm) or target - P (best approximation)
    pvals = 1.0 + problem.basis.values[:, : problem.n] @ c
    if problem.target_values is None:
        return pvals
    return problem.target_values - pvals


def _weighted_solve(E: np.ndarray, a: np.ndarray, u: np.ndarray) -> np.ndarray:
    """argmin_c sum u_i |a_i + (Ec)_i|^2 via normal equations, lstsq fallback."""
    if E.shape[1] == 0:
        return np.zeros(0, dtype=complex)
    M = E.conj().T @ (u[:, None] * E)
    rhs = -(E.conj().T @ (u * a))
    try:
        c = np.linalg.solve(M, rhs)
        if not np.all(np.isfinite(c)):
            raise np.linalg.LinAlgError
        return c
    except np.linalg.LinAlgError:
        su = np.sqrt(u)
        c, *_ = np.linalg.lstsq(su[:, None] * E, -su * a, rcond=None)
        return c


def solve_problem(problem: ExtremalProblem) -> ExtremalSolution:
    """IRLS with monotone objective (backtracking) and epsilon-floored weights."""
    E = problem.basis.values[:, : problem.n]
    w = problem.grid.arclength_weights
    # r = a + Ec up to sign in both problems:
    a = np.ones(problem.grid.size, dtype=complex)
    if problem.target_values is not None:
        a = a - problem.target_values  # |target - (1 + Ec)| = |a + Ec|
    c = _weighted_solve(E, a, w)
    obj = _objective(problem, c)
    iterations = 1
    stationarity = 0.0
    if abs(problem.p - 2.0) > 0:
        eps_scale = EPS_REL
        eps_drops = 0
        for _ in range(MAX_ITER - 1):
            r = a + E @ c
            rabs = np.abs(r)
            eps = eps_scale * max(float(np.mean(rabs)), 1e-30)
            u = w * np.maximum(rabs, eps) ** (problem.p - 2.0)
            c_new = _weighted_solve(E, a, u)
            step, obj_try, c_try = 1.0, None, None
            for _ in range(40):
                c_try = c + step * (c_new - c)
                obj_try = _objective(problem, c_try)
                if obj_try <= obj * (1.0 + 1e-15):
                    break
                step *= 0.5
            iterations += 1
            if obj_try > obj * (1.0 + 1e-12):
                # stalled: tighten the weight floor, then give up loudly
                if eps_drops < 2:
                    eps_scale *= 0.1
                    eps_drops += 1
                    continue
                raise NumericalError(
                    "irls", f"objective non-decrease after backtracking (p={problem.p})"
                )
            stationarity = abs(obj - obj_try) / max(obj, 1e-300)
            c = c_try
            obj = obj_try
            if stationarity < OBJ_RTOL:
                break
    poly_coeffs = np.zeros(problem.n + 1, dtype=complex)
    poly_coeffs[0] = 1.0
    if problem.n > 0:
        poly_coeffs += c @ problem.basis.coeffs[: problem.n, : problem.n + 1]
    q = Poly(problem.zeta, poly_coeffs)
    if abs(q(problem.zeta) - 1.0) > 1e-10:
        raise NumericalError("irls", "constraint P(zeta) = 1 violated")
    return ExtremalSolution(
        q=q,
        achieved_norm=obj,
        iterations=iterations,
        stationarity=stationarity,
        leading_coeff=complex(poly_coeffs[problem.n]),
        coeffs_in_basis=c,
    )


def solve_min_norm(grid: QuadratureGrid, zeta: complex, n: int, p: float, basis=None):
    """Degree-n minimal boundary p-norm polynomial with P(zeta) = 1."""
    return solve_problem(make_problem(grid, zeta, n, p, None, basis))


def solve_best_approx(grid: QuadratureGrid, zeta: complex, n: int, p: float, target, basis=None):
    """Degree-n best p-norm approximation to `target` with P(zeta) = 1."""
    return solve_problem(make_problem(grid, zeta, n, p, target, basis))


def solve_unconstrained(grid: QuadratureGrid, zeta: complex, n: int, p: float, target):
    """Best p-norm approximation with no interpolation constraint.

    Returns (poly, achieved_norm).  Used for normalization-penalty diagnostics.
    """
    if p < 1.0:
        raise ConfigError("solver handles p >= 1 only")
    basis = build_orthobasis(grid, zeta, n)
    E = basis.values
    w = grid.arclength_weights
    a = -np.asarray(target, dtype=complex)
    c = _weighted_solve(E, a, w)

    def obj_of(cc):
        return float(np.sum(np.abs(a + E @ cc) ** p * w) ** (1.0 / p))

    obj = obj_of(c)
    if abs(p - 2.0) > 0:
        for _ in range(MAX_ITER):
            r = a + E @ c
            rabs = np.abs(r)
            eps = EPS_REL * max(float(np.mean(rabs)), 1e-30)
            u = w * np.maximum(rabs, eps) ** (p - 2.0)
            c_new = _weighted_solve(E, a, u)
            step = 1.0
            for _ in range(40):
                c_try = c + step * (c_new - c)
                obj_try = obj_of(c_try)
                if obj_try <= obj * (1.0 + 1e-15):
                    break
                step *= 0.5
            rel = abs(obj - obj_try) / max(obj, 1e-300)
            c, obj = c_try, min(obj, obj_try)
            if rel < OBJ_RTOL:
                break
    coeffs = c @ basis.coeffs
    return Poly(zeta, coeffs), obj


def optimality_check(
    problem: ExtremalProblem, solution: ExtremalSolution, trials: int, seed: int
) -> float:
    """Min over random feasible perturbations of the relative objective increase.

    Perturbations vanish at zeta by construction (they live in the e-basis)
    and are scaled to p-norms 1e-2, 1e-4 and 1e-6; by convexity a correct
    solution returns a value >= -1e-7 at every scale, while an off-optimum
    solution shows descent at the larger ones.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    E = problem.basis.values[:, : problem.n]
    w = problem.grid.arclength_weights
    base = solution.achieved_norm
    worst = np.inf
    for _ in range(trials):
        d = rng.standard_normal(problem.n) + 1j * rng.standard_normal(problem.n)
        dvals = E @ d
        dnorm = float(np.sum(np.abs(dvals) ** problem.p * w) ** (1.0 / problem.p))
        if dnorm == 0:
            continue
        for scale in (1e-2, 1e-4, 1e-6):
            pert = _objective(problem, solution.coeffs_in_basis + d * (scale / dnorm))
            worst = min(worst, (pert - base) / max(base, 1e-300))
    return float(worst)
