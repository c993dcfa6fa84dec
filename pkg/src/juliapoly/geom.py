"""Jordan domains with piecewise-analytic boundaries.

A domain is an ordered chain of parametrized arcs (each on [0, 1]) forming a
positively oriented closed curve, together with its corner list (vertex and
exterior-angle fraction lambda, exterior angle = lambda*pi) and an interior
normalization point zeta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError

ENDPOINT_TOL = 1e-12

ARC_KINDS = ("line-segment", "circular-arc", "polynomial-image-arc", "power-cusp-arc")


@dataclass(frozen=True)
class ArcSpec:
    """One boundary arc, parametrized on t in [0, 1].

    kind-specific params:
      line-segment:          (z0, z1)
      circular-arc:          (center, radius, theta0, theta1)
      polynomial-image-arc:  (psi_coeffs ascending, radius, theta0, theta1),
                             gamma(t) = psi(R * exp(i*theta(t)))
      power-cusp-arc:        (amp, expo, sign, x0, x1),
                             gamma(t) = x + i*sign*amp*x^a*(1-x)^a, x linear in t
    """

    kind: str
    params: tuple

    def point(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "line-segment":
            z0, z1 = self.params
            return z0 + t * (z1 - z0)
        if self.kind == "circular-arc":
            c, r, th0, th1 = self.params
            return c + r * np.exp(1j * (th0 + t * (th1 - th0)))
        if self.kind == "polynomial-image-arc":
            coeffs, r, th0, th1 = self.params
            w = r * np.exp(1j * (th0 + t * (th1 - th0)))
            return _polyval_ascending(coeffs, w)
        if self.kind == "power-cusp-arc":
            amp, a, sign, x0, x1 = self.params
            x = x0 + t * (x1 - x0)
            return x + 1j * sign * amp * x**a * (1.0 - x) ** a
        raise ConfigError(f"unknown arc kind {self.kind!r}")

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "line-segment":
            z0, z1 = self.params
            return np.broadcast_to(z1 - z0, t.shape).copy() if t.shape else z1 - z0
        if self.kind == "circular-arc":
            c, r, th0, th1 = self.params
            dth = th1 - th0
            return r * 1j * dth * np.exp(1j * (th0 + t * dth))
        if self.kind == "polynomial-image-arc":
            coeffs, r, th0, th1 = self.params
            dth = th1 - th0
            w = r * np.exp(1j * (th0 + t * dth))
            dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
            return _polyval_ascending(dcoeffs, w) * 1j * dth * w
        if self.kind == "power-cusp-arc":
            amp, a, sign, x0, x1 = self.params
            dx = x1 - x0
            x = x0 + t * dx
            dy = amp * a * (x ** (a - 1.0) * (1.0 - x) ** a - x**a * (1.0 - x) ** (a - 1.0))
            return dx * (1.0 + 1j * sign * dy)
        raise ConfigError(f"unknown arc kind {self.kind!r}")


def _polyval_ascending(coeffs, w):
    out = np.zeros_like(np.asarray(w, dtype=complex))
    for c in reversed(list(coeffs)):
        out = out * w + c
    return out


@dataclass(frozen=True)
class CornerInfo:
    vertex: complex
    lam: float  # exterior angle is lam * pi, 0 < lam <= 2


@dataclass(frozen=True)
class DomainSpec:
    arcs: tuple
    corners: tuple
    zeta: complex
    name: str

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def boundary_sample(self, per_arc: int = 256):
        """Dense positively-ordered boundary sample (open: last != first)."""
        ts = (np.arange(per_arc) + 0.5) / per_arc
        return np.concatenate([arc.point(ts) for arc in self.arcs])

    def corner_flags(self, arc_index: int):
        """(start_is_corner, end_is_corner) for the given arc."""
        a = self.arcs[arc_index]
        start, end = complex(a.point(0.0)), complex(a.point(1.0))
        verts = [c.vertex for c in self.corners]

        def near(z):
            return any(abs(z - v) < 1e-9 for v in verts)

        return near(start), near(end)


def boundary_point(domain: DomainSpec, arc_index: int, t: float):
    """Return (gamma_i(t), gamma_i'(t)) for arc i of the domain."""
    if not 0 <= arc_index < domain.n_arcs:
        raise ConfigError(f"arc index {arc_index} out of range")
    if not np.all((np.asarray(t) >= 0.0) & (np.asarray(t) <= 1.0)):
        raise ConfigError("parameter t outside [0, 1]")
    arc = domain.arcs[arc_index]
    return arc.point(t), arc.derivative(t)


def min_exterior_angle(domain: DomainSpec) -> Optional[float]:
    """Smallest exterior-angle fraction lambda; None for analytic boundary."""
    if not domain.corners:
        return None
    return min(c.lam for c in domain.corners)


def _validate(domain: DomainSpec) -> DomainSpec:
    for arc in domain.arcs:
        if arc.kind not in ARC_KINDS:
            raise ConfigError(f"unsupported arc kind {arc.kind!r}")
    if not (math.isfinite(domain.zeta.real) and math.isfinite(domain.zeta.imag)):
        raise ConfigError("zeta must be finite")
    # closure of the arc chain
    m = domain.n_arcs
    for i in range(m):
        end = complex(domain.arcs[i].point(1.0))
        start = complex(domain.arcs[(i + 1) % m].point(0.0))
        if abs(end - start) > 1e-9:
            raise ConfigError(
                f"arc chain not closed between arcs {i} and {(i + 1) % m}: "
                f"{end} vs {start}"
            )
    # degenerate arcs
    ts = np.linspace(0.0, 1.0, 64)
    for i, arc in enumerate(domain.arcs):
        pts = arc.point(ts)
        if np.sum(np.abs(np.diff(pts))) < 1e-12:
            raise ConfigError(f"arc {i} has zero length")
        if not np.all(np.isfinite(pts)):
            raise ConfigError(f"arc {i} produces non-finite points")
    # corner angles
    for c in domain.corners:
        if not (0.0 < c.lam <= 2.0):
            raise ConfigError(f"exterior-angle fraction {c.lam} outside (0, 2]")
        shared = min(
            min(abs(complex(a.point(0.0)) - c.vertex), abs(complex(a.point(1.0)) - c.vertex))
            for a in domain.arcs
        )
        if shared > ENDPOINT_TOL * 1e3 + 1e-9:
            raise ConfigError(f"corner vertex {c.vertex} not on an arc junction")
    # orientation and interiority of zeta
    sample = domain.boundary_sample(256)
    area = 0.5 * np.sum(np.imag(np.conj(sample) * np.roll(sample, -1)))
    if area <= 0:
        raise ConfigError("boundary is not positively oriented")
    rel = sample - domain.zeta
    if np.min(np.abs(rel)) < 1e-12:
        raise ConfigError("zeta lies on the boundary")
    winding = np.sum(np.angle(np.roll(rel, -1) / rel)) / (2.0 * np.pi)
    if abs(winding - 1.0) > 1e-6:
        raise ConfigError("zeta is not an interior point (winding != 1)")
    return domain


def _simple_curve(sample) -> bool:
    from shapely.geometry import LineString

    ring = np.append(sample, sample[0])
    return LineString(np.column_stack([ring.real, ring.imag])).is_simple


def _as_complex(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise ConfigError(f"expected [re, im] pair, got {pair!r}")
    z = complex(float(pair[0]), float(pair[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError("non-finite coordinate")
    return z


def build_domain(description: dict) -> DomainSpec:
    """Build a validated DomainSpec from a JSON-style description.

    Schema: {"kind": "disk"|"polygon"|"polyimage"|"cusp",
             "params": {...}, "zeta": [re, im], "name": str}
    Unknown top-level fields are rejected.
    """
    if not isinstance(description, dict):
        raise ConfigError("domain description must be a mapping")
    allowed = {"kind", "params", "zeta", "name"}
    extra = set(description) - allowed
    if extra:
        raise ConfigError(f"unknown fields in domain description: {sorted(extra)}")
    try:
        kind = description["kind"]
        params = description["params"]
    except KeyError as e:
        raise ConfigError(f"missing field {e.args[0]!r}") from None
    name = description.get("name", kind)

    if kind == "disk":
        center = _as_complex(params.get("center", [0.0, 0.0]))
        radius = float(params["radius"])
        if radius <= 0:
            raise ConfigError("disk radius must be positive")
        zeta = _as_complex(description["zeta"]) if "zeta" in description else center
        arcs = (ArcSpec("circular-arc", (center, radius, 0.0, 2.0 * math.pi)),)
        return _validate(DomainSpec(arcs, (), zeta, name))

    if kind == "polygon":
        verts = [_as_complex(v) for v in params["vertices"]]
        if len(verts) < 3:
            raise ConfigError("polygon needs at least 3 vertices")
        zeta = _as_complex(description["zeta"])
        m = len(verts)
        arcs = tuple(
            ArcSpec("line-segment", (verts[i], verts[(i + 1) % m])) for i in range(m)
        )
        corners = []
        for i in range(m):
            d1 = verts[i] - verts[i - 1]
            d2 = verts[(i + 1) % m] - verts[i]
            turn = np.angle(d2 / d1)
            lam = 1.0 + turn / math.pi
            if not (0.0 < lam <= 2.0):
                raise ConfigError(f"vertex {i}: exterior-angle fraction {lam} outside (0, 2]")
            corners.append(CornerInfo(verts[i], lam))
        return _validate(DomainSpec(arcs, tuple(corners), zeta, name))

    if kind == "polyimage":
        center = _as_complex(params.get("center", [0.0, 0.0]))
        radius = float(params.get("radius", 1.0))
        higher = [_as_complex(c) for c in params.get("coeffs", [])]
        # psi(w) = center + w + sum_{k>=2} c_k w^k; analytic boundary, no corners
        coeffs = tuple([center, 1.0 + 0.0j] + higher)
        zeta = _as_complex(description["zeta"]) if "zeta" in description else center
        arcs = (ArcSpec("polynomial-image-arc", (coeffs, radius, 0.0, 2.0 * math.pi)),)
        dom = DomainSpec(arcs, (), zeta, name)
        if not _simple_curve(dom.boundary_sample(512)):
            raise ConfigError("polyimage boundary self-intersects (not a Jordan curve)")
        return _validate(dom)

    if kind == "cusp":
        height = float(params.get("height", 0.35))
        a = float(params.get("exponent", 2.0))
        if a <= 1.0:
            raise ConfigError("cusp exponent must satisfy a > 1")
        if height <= 0:
            raise ConfigError("cusp height must be positive")
        amp = height * 4.0**a  # profile peaks at `height` at x = 1/2
        zeta = (
            _as_complex(description["zeta"]) if "zeta" in description else complex(0.5, 0.0)
        )
        arcs = (
            ArcSpec("power-cusp-arc", (amp, a, -1.0, 0.0, 1.0)),
            ArcSpec("power-cusp-arc", (amp, a, +1.0, 1.0, 0.0)),
        )
        corners = (CornerInfo(0.0 + 0.0j, 2.0), CornerInfo(1.0 + 0.0j, 2.0))
        dom = DomainSpec(arcs, corners, zeta, name)
        if not _simple_curve(dom.boundary_sample(512)):
            raise ConfigError("cusp boundary self-intersects (not a Jordan curve)")
        return _validate(dom)

    raise ConfigError(f"unsupported domain kind {kind!r}")
