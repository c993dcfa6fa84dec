"""Polynomial arithmetic in the shifted monomial basis (z - zeta)^k.

The shift makes the two normalizations of the toolkit structural: the
interpolation constraint P(zeta) = 1 is just c_0 = 1, and antiderivatives
anchored at zeta have zero constant term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, NumericalError

DEGREE_CAP = 4096
TRIM_REL = 1e-14


@dataclass(frozen=True)
class Poly:
    """Polynomial sum_k coeffs[k] * (z - zeta)^k."""

    zeta: complex
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs, dtype=complex)))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        u = np.asarray(z, dtype=complex) - self.zeta
        out = np.full_like(u, self.coeffs[-1])
        for c in self.coeffs[-2::-1]:
            out = out * u + c
        return out if out.shape else complex(out)

    def power(self, p: int) -> "Poly":
        """Integer power via repeated coefficient convolution."""
        if not (isinstance(p, (int, np.integer)) and p >= 1):
            raise ConfigError("power exponent must be a positive integer")
        if self.degree * p > DEGREE_CAP:
            raise ConfigError(f"degree {self.degree * p} exceeds cap {DEGREE_CAP}")
        out = self.coeffs.copy()
        for _ in range(p - 1):
            out = np.convolve(out, self.coeffs)
        return Poly(self.zeta, out)

    def antiderivative(self) -> "Poly":
        """Antiderivative vanishing at zeta (constant term 0)."""
        k = np.arange(1, self.coeffs.size + 1)
        return Poly(self.zeta, np.concatenate([[0.0], self.coeffs / k]))

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly(self.zeta, [0.0])
        k = np.arange(1, self.coeffs.size)
        return Poly(self.zeta, self.coeffs[1:] * k)

    def trimmed(self, rel: float = TRIM_REL) -> "Poly":
        """Drop trailing coefficients below rel * max|c_k|."""
        thresh = rel * np.max(np.abs(self.coeffs))
        nz = np.nonzero(np.abs(self.coeffs) > thresh)[0]
        if nz.size == 0:
            return Poly(self.zeta, [0.0])
        return Poly(self.zeta, self.coeffs[: nz[-1] + 1])


@dataclass(frozen=True)
class ZeroSet:
    roots: np.ndarray
    residuals: np.ndarray
    converged: np.ndarray
    sweeps: int


def find_roots(poly: Poly, tol: float = 1e-12, max_sweeps: int = 500) -> ZeroSet:
    """All roots by simultaneous Aberth-Ehrlich iteration.

    Initial guesses sit on a circle of the Cauchy-bound radius around zeta.
    Non-convergence is flagged per root, never silent.
    """
    q = poly.trimmed()
    n = q.degree
    if n < 1:
        raise ConfigError("root finding needs degree >= 1 after trimming")
    c = q.coeffs / np.max(np.abs(q.coeffs))
    dc = c[1:] * np.arange(1, n + 1)
    cauchy = 1.0 + np.max(np.abs(c[:-1])) / np.abs(c[-1])
    angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n
    guesses = cauchy * np.exp(1j * angles)
    sweeps, last_corr = _kernels.aberth_iterate(c, dc, guesses, tol, max_sweeps)
    roots_u = guesses  # updated in place by the kernel
    res = np.abs(_horner(c, roots_u))
    converged = last_corr < tol
    return ZeroSet(poly.zeta + roots_u, res, converged, sweeps)


def _horner(coeffs, z):
    out = np.full_like(np.asarray(z, dtype=complex), coeffs[-1])
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


def moments(points, k_max: int, center: complex, scale: float):
    """Normalized power moments m_k of the counting measure on `points`.

    m_k = mean(((z - center)/scale)^k), k = 1..k_max.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.size == 0:
        raise ConfigError("moments of an empty point set")
    if scale <= 0:
        raise ConfigError("scale must be positive")
    u = (pts - center) / scale
    return np.array([np.mean(u**k) for k in range(1, k_max + 1)])
