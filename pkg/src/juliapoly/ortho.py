"""Contour-orthonormal polynomials and the kernel-based map machinery.

The basis is built Arnoldi style: each new vector is (z - zeta) times the
previous orthonormal vector's node values, orthogonalized twice against all
earlier ones.  Shifted-basis coefficients ride along through the identical
recurrence, so coefficient form never has to be re-fit from node values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .polyops import Poly
from .quad import QuadratureGrid, p_norm

GRAM_TOL = 1e-8


@dataclass(frozen=True)
class OrthoBasis:
    grid: QuadratureGrid
    zeta: complex
    n: int
    values: np.ndarray  # (nodes, n+1); column k holds p_k at the grid nodes
    coeffs: np.ndarray  # (n+1, n+1); row k holds shifted-basis coeffs of p_k
    gram_residual: float
    hess: np.ndarray  # recurrence projections; row k holds <v, p_j> for j < k
    norms: np.ndarray  # recurrence normalizations


def evaluate_basis(basis: OrthoBasis, z, n: int | None = None) -> np.ndarray:
    """p_0..p_n at arbitrary points by re-running the stored recurrence.

    Stable where coefficient (Horner) evaluation is not: high-degree
    shifted-monomial coefficients grow like capacity^(-k) and destroy all
    precision at boundary points with |z - zeta| above the capacity.
    """
    n = basis.n if n is None else int(n)
    if n > basis.n:
        raise ConfigError(f"degree {n} exceeds basis degree {basis.n}")
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    u = zz - basis.zeta
    out = np.zeros((zz.size, n + 1), dtype=complex)
    out[:, 0] = basis.coeffs[0, 0]
    for k in range(1, n + 1):
        v = u * out[:, k - 1] - out[:, :k] @ basis.hess[k, :k]
        out[:, k] = v / basis.norms[k]
    return out


def build_orthobasis(
    grid: QuadratureGrid, zeta: complex, n: int, gram_tol: float = GRAM_TOL
) -> OrthoBasis:
    """Orthonormal polynomials p_0..p_n for <f,g> = sum f conj(g) |dz|."""
    npts = grid.size
    if n + 1 > npts // 4:
        raise ConfigError(f"degree {n} needs at least {4 * (n + 1)} nodes, grid has {npts}")
    w = grid.arclength_weights
    u = grid.points - zeta
    values = np.zeros((npts, n + 1), dtype=complex)
    coeffs = np.zeros((n + 1, n + 1), dtype=complex)
    hess = np.zeros((n + 1, n + 1), dtype=complex)
    norms = np.ones(n + 1)
    length = float(np.sum(w))
    values[:, 0] = 1.0 / np.sqrt(length)
    coeffs[0, 0] = 1.0 / np.sqrt(length)
    for k in range(1, n + 1):
        v = u * values[:, k - 1]
        cv = np.zeros(n + 1, dtype=complex)
        cv[1 : k + 1] = coeffs[k - 1, :k]
        scale = np.sqrt(np.sum(np.abs(v) ** 2 * w).real)
        for _ in range(2):  # classical "twice is enough" re-orthogonalization
            h = values[:, :k].conj().T @ (w * v)
            v = v - values[:, :k] @ h
            cv = cv - h @ coeffs[:k]
            hess[k, :k] += h
        nrm = np.sqrt(np.sum(np.abs(v) ** 2 * w).real)
        if nrm < 1e-13 * scale:
            raise NumericalError("orthobasis", f"breakdown at degree {k} (grid too coarse)")
        values[:, k] = v / nrm
        coeffs[k] = cv / nrm
        norms[k] = nrm
    gram = values.T @ (values.conj() * w[:, None])
    residual = float(np.max(np.abs(gram - np.eye(n + 1))))
    if residual > gram_tol:
        raise NumericalError("orthobasis", f"gram residual {residual:.3e} above {gram_tol:.1e}")
    return OrthoBasis(grid, zeta, n, values, coeffs, residual, hess, norms)


@dataclass(frozen=True)
class SzegoState:
    """Partial sums of the reproducing kernel of the boundary inner product."""

    basis: OrthoBasis
    pk_at_zeta: np.ndarray  # p_k(zeta), k = 0..n
    mass_cum: np.ndarray  # cumulative sum of |p_k(zeta)|^2

    @property
    def kernel_mass(self) -> float:
        return float(self.mass_cum[-1])


def make_szego_state(basis: OrthoBasis) -> SzegoState:
    pkz = basis.coeffs[:, 0].copy()  # value at zeta is the constant coefficient
    mass = np.cumsum(np.abs(pkz) ** 2)
    if mass[0] <= 0:
        raise NumericalError("szego", "kernel mass vanished (degenerate basis)")
    return SzegoState(basis, pkz, mass)


def szego_polynomial(state: SzegoState, n: int) -> Poly:
    """Kernel-normalized polynomial: sum conj(p_k(zeta)) p_k / kernel mass."""
    if n > state.basis.n:
        raise ConfigError(f"degree {n} exceeds basis degree {state.basis.n}")
    mass = state.mass_cum[n]
    if mass <= 0:
        raise NumericalError("szego", "zero kernel mass")
    coef = (state.pk_at_zeta[: n + 1].conj() @ state.basis.coeffs[: n + 1, : n + 1]) / mass
    q = Poly(state.basis.zeta, coef)
    if abs(q(state.basis.zeta) - 1.0) > 1e-10:
        raise NumericalError("szego", "normalization Q(zeta) = 1 violated")
    return q


def szego_values(state: SzegoState, n: int) -> np.ndarray:
    """Grid-node values of szego_polynomial(state, n)."""
    if n > state.basis.n:
        raise ConfigError(f"degree {n} exceeds basis degree {state.basis.n}")
    mass = state.mass_cum[n]
    return state.basis.values[:, : n + 1] @ (state.pk_at_zeta[: n + 1].conj() / mass)


def szego_kernel_partial(state: SzegoState, z, n: int):
    """Partial kernel sum_{k<=n} conj(p_k(zeta)) p_k(z) at arbitrary z."""
    zz = np.asarray(z, dtype=complex)
    vals = evaluate_basis(state.basis, zz, n) @ state.pk_at_zeta[: n + 1].conj()
    out = vals.reshape(zz.shape)
    return out if out.shape else complex(out)


def szego_eval(state: SzegoState, z, n: int):
    """szego_polynomial(state, n) at arbitrary z via the stable recurrence."""
    return szego_kernel_partial(state, z, n) / state.mass_cum[n]


def map_approximant(q: Poly, p: int) -> Poly:
    """Polynomial map approximant: antiderivative of q^p, vanishing at zeta."""
    return q.power(p).antiderivative()


def conformal_radius_estimate(state: SzegoState, n: int) -> float:
    """Radius estimate R_n = |kernel polynomial|_2^2 / (2 pi), nonincreasing in n."""
    if n < 0 or n > state.basis.n:
        raise ConfigError(f"degree {n} out of range")
    qv = szego_values(state, n)
    nrm2 = float(np.sum(np.abs(qv) ** 2 * state.basis.grid.arclength_weights))
    return nrm2 / (2.0 * np.pi)
