"""Ground-truth references: exact conformal maps, capacity, self-references.

Oracle domains are disks and polynomial images of disks, where the map to
the round disk and its derivative are known exactly (the polynomial is
inverted by Newton).  Corner domains get a high-degree kernel-polynomial
self-reference instead, validated by a Cauchy-sequence check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, NumericalError
from .geom import DomainSpec, build_domain
from .ortho import (
    SzegoState,
    build_orthobasis,
    conformal_radius_estimate,
    make_szego_state,
    szego_polynomial,
    szego_values,
)
from .polyops import Poly, moments
from .quad import QuadratureGrid, build_grid

NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class ReferenceMap:
    """Exact map phi onto a round disk, normalized phi(zeta)=0, phi'(zeta)=1.

    kind 'disk': phi(z) = z - zeta.  kind 'polyimage': the domain boundary is
    psi(R e^(i theta)) for a polynomial psi with psi(0) = zeta, psi'(0) = 1;
    R is then the conformal radius.
    """

    kind: str
    zeta: complex
    R: float
    psi_coeffs: np.ndarray  # ascending; psi(w) = zeta + w + ...

    def psi(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.full_like(w, self.psi_coeffs[-1])
        for c in self.psi_coeffs[-2::-1]:
            out = out * w + c
        return out

    def psi_prime(self, w):
        w = np.asarray(w, dtype=complex)
        dc = self.psi_coeffs[1:] * np.arange(1, self.psi_coeffs.size)
        out = np.full_like(w, dc[-1])
        for c in dc[-2::-1]:
            out = out * w + c
        return out

    def phi(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            return z - self.zeta
        w = z - self.zeta  # first Newton guess
        for _ in range(100):
            f = self.psi(w) - z
            if np.max(np.abs(f)) < NEWTON_TOL * max(1.0, float(np.max(np.abs(z)))):
                break
            w = w - f / self.psi_prime(w)
        else:
            w = self._phi_continuation(z)
        f = self.psi(w) - z
        bad = np.abs(f) > 1e-10 * max(1.0, float(np.max(np.abs(z))))
        if np.any(bad):
            raise NumericalError(
                "newton-inversion", f"no convergence at {int(np.sum(bad))} points"
            )
        return w

    def _phi_continuation(self, z):
        # walk from zeta to each z along a ray, reusing the previous solution
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = np.zeros_like(z)
        for step in np.linspace(0.1, 1.0, 10):
            zt = self.zeta + step * (z - self.zeta)
            for _ in range(60):
                f = self.psi(w) - zt
                if np.max(np.abs(f)) < NEWTON_TOL:
                    break
                w = w - f / self.psi_prime(w)
        return w

    def phi_prime(self, z):
        if self.kind == "disk":
            return np.ones_like(np.asarray(z, dtype=complex))
        return 1.0 / self.psi_prime(self.phi(z))


def make_reference(kind: str, params: dict) -> ReferenceMap:
    """Validated reference map ('disk' or 'polyimage')."""
    if kind == "disk":
        center = complex(*params.get("center", (0.0, 0.0)))
        R = float(params["radius"])
        if R <= 0:
            raise ConfigError("radius must be positive")
        return ReferenceMap("disk", center, R, np.array([center, 1.0 + 0j]))
    if kind == "polyimage":
        center = complex(*params.get("center", (0.0, 0.0)))
        R = float(params.get("radius", 1.0))
        higher = [complex(*c) for c in params.get("coeffs", [])]
        coeffs = np.array([center, 1.0 + 0j] + higher, dtype=complex)
        dc = coeffs[1:] * np.arange(1, coeffs.size)
        if dc.size > 1:
            zeros = np.roots(dc[::-1])
            if np.any(np.abs(zeros) <= R * (1.0 + 1e-9)):
                raise ConfigError("psi' vanishes on the closed disk (map not conformal)")
        ref = ReferenceMap("polyimage", center, R, coeffs)
        theta = 2.0 * np.pi * np.arange(512) / 512
        from .geom import _simple_curve

        if not _simple_curve(ref.psi(R * np.exp(1j * theta))):
            raise ConfigError("polyimage boundary self-intersects")
        return ref
    raise ConfigError(f"unsupported reference kind {kind!r}")


def reference_for_domain(desc: dict) -> ReferenceMap:
    """Reference map for an oracle-capable domain description."""
    if desc["kind"] not in ("disk", "polyimage"):
        raise ConfigError(f"no exact reference for domain kind {desc['kind']!r}")
    return make_reference(desc["kind"], desc["params"])


def branch_power(values: np.ndarray, inv_p: float) -> np.ndarray:
    """values^inv_p with a continuous branch along a boundary-ordered sequence."""
    v = np.asarray(values, dtype=complex)
    if np.any(v == 0):
        raise NumericalError("branch-power", "zero value on the boundary")
    logs = np.log(np.abs(v)) + 1j * np.unwrap(np.angle(v))
    return np.exp(inv_p * logs)


def phi_prime_power(ref: ReferenceMap, boundary_nodes, p: float) -> np.ndarray:
    """(phi')^(1/p) at ordered boundary nodes, with a continuous branch."""
    if p <= 0:
        raise ConfigError("p must be positive")
    vals = ref.phi_prime(np.asarray(boundary_nodes, dtype=complex))
    return branch_power(vals, 1.0 / p)


@dataclass(frozen=True)
class EquilibriumOracle:
    """Greedy-Fekete (Leja) proxy for the equilibrium measure and capacity."""

    leja_points: np.ndarray
    capacity_estimate: float
    moment_table: np.ndarray  # m_1..m_k_max of the uniform measure on the points
    center: complex
    scale: float


def leja_points_from(points, m: int):
    """Greedy Leja subset of a raw point cloud (first point: max |z - mean|)."""
    pts = np.asarray(points, dtype=complex)
    if m < 8:
        raise ConfigError("need m >= 8 points")
    if m > pts.size:
        raise ConfigError("m exceeds number of candidates")
    centroid = np.mean(pts)
    first = int(np.argmax(np.abs(pts - centroid)))
    idx = _kernels.leja_select(pts, first, m)
    return pts[idx]


def capacity_from_points(pts) -> float:
    """Transfinite-diameter estimator from pairwise log distances.

    The raw m-point diameter overshoots by the factor m^(1/(m-1))
    (exactly that factor for roots of unity); dividing it out removes the
    leading finite-m bias.
    """
    pts = np.asarray(pts, dtype=complex)
    m = pts.size
    d = np.abs(pts[:, None] - pts[None, :])
    iu = np.triu_indices(m, k=1)
    raw = np.exp(2.0 / (m * (m - 1)) * np.sum(np.log(d[iu])))
    return float(raw * m ** (-1.0 / (m - 1)))


def leja_equilibrium(grid: QuadratureGrid, m: int, k_max: int) -> EquilibriumOracle:
    """Capacity and equilibrium-moment oracle from greedy Leja boundary points."""
    pts = leja_points_from(grid.points, m)
    if np.unique(pts).size < m:
        raise NumericalError("leja", "duplicate selection (grid too coarse)")
    cap = capacity_from_points(pts)
    w = grid.arclength_weights
    center = complex(np.sum(grid.points * w) / np.sum(w))
    scale = float(np.max(np.abs(grid.points - center)))
    table = moments(pts, k_max, center, scale)
    return EquilibriumOracle(pts, cap, table, center, scale)


@dataclass(frozen=True)
class SelfReference:
    """High-degree kernel-polynomial self-reference for corner domains."""

    grid: QuadratureGrid  # oracle-resolution grid the state lives on
    state: SzegoState
    n_ref: int
    R_hat: float
    q_ref: Poly  # degree-n_ref kernel polynomial, (q_ref)^2 -> phi'
    phi_prime_values: np.ndarray  # (q_ref)^2 at the grid nodes


ORACLE_PANELS = 64
ORACLE_POINTS = 24


def corner_reference(
    domain: DomainSpec,
    n_ref: int = 256,
    panels_per_arc: int = ORACLE_PANELS,
    points_per_panel: int = ORACLE_POINTS,
    grading: float = 3.0,
) -> SelfReference:
    """Self-oracle: degree-n_ref kernel polynomial on a fine grid.

    Validity rests on the Cauchy-sequence behavior of the radius estimates,
    exercised by the test suite rather than re-checked per call.
    """
    grid = build_grid(domain, panels_per_arc, points_per_panel, grading)
    basis = build_orthobasis(grid, domain.zeta, n_ref, gram_tol=1e-6)
    state = make_szego_state(basis)
    R_hat = conformal_radius_estimate(state, n_ref)
    q_ref = szego_polynomial(state, n_ref)
    qv = szego_values(state, n_ref)
    return SelfReference(grid, state, n_ref, R_hat, q_ref, qv**2)
