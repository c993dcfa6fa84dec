"""Rate harness: n-sweeps, error bounds, rate-model fits, and reports.

Produces one row per degree (errors, the uniform-norm bound, leading
coefficient and zero diagnostics), fits power-law and stretched-exponential
decay models to the error column, and emits CSV / JSON / SVG artifacts.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, NumericalError
from .extremal import build_constrained_basis, evaluate_constrained_basis, solve_best_approx
from .geom import build_domain
from .oracle import (
    EquilibriumOracle,
    SelfReference,
    branch_power,
    corner_reference,
    leja_equilibrium,
    phi_prime_power,
    reference_for_domain,
)
from .ortho import (
    build_orthobasis,
    conformal_radius_estimate,
    make_szego_state,
    szego_eval,
    szego_polynomial,
    szego_values,
)
from .polyops import Poly, find_roots, moments
from .quad import QuadratureGrid, build_grid, p_norm

CSV_HEADER = "n,err_p,err_sup,bound12,lead_coeff_scaled,zero_moment_gap"
BOUND_SLACK = 1.05


def _cumulative_contour(grid: QuadratureGrid, gvals: np.ndarray) -> np.ndarray:
    """Cumulative integral of g dz along the boundary, at every grid node.

    Values are measured from the start of the boundary chain.  Within each
    panel the integrand (known at the Gauss nodes) is expanded in Legendre
    polynomials and integrated term by term, so partial integrals at the
    nodes themselves keep the full quadrature accuracy.
    """
    m = grid.points_per_panel
    x, wg = np.polynomial.legendre.leggauss(m)
    P = np.polynomial.legendre.legvander(x, m)  # columns P_0..P_m at the nodes
    # per-node values of the pulled-back integrand f(x) = g(z(x)) z'(x)
    f = (np.asarray(gvals, dtype=complex) * grid.complex_weights).reshape(-1, m) / wg
    ell = np.arange(m)
    a = (f @ (wg[:, None] * P[:, :m])) * ((2.0 * ell + 1.0) / 2.0)  # (panels, m)
    partial = np.zeros((m, m))  # partial[j, l] = integral of P_l from -1 to x_j
    partial[:, 0] = x + 1.0
    for l in range(1, m):
        partial[:, l] = (P[:, l + 1] - P[:, l - 1]) / (2.0 * l + 1.0)
    within = a @ partial.T
    offsets = np.concatenate([[0.0 + 0.0j], np.cumsum(2.0 * a[:, 0])[:-1]])
    return (offsets[:, None] + within).ravel()


def _segment_integral(z0: complex, z1: complex, func, panels: int = 8, pts: int = 24) -> complex:
    """Integral of func along the straight segment z0 -> z1 (composite Gauss)."""
    x, wg = np.polynomial.legendre.leggauss(pts)
    total = 0.0 + 0.0j
    for k in range(panels):
        mid = (k + 0.5) / panels
        half = 0.5 / panels
        t = mid + half * x
        total += np.sum(func(z0 + t * (z1 - z0)) * wg) * half
    return total * (z1 - z0)


def _map_values(grid: QuadratureGrid, qfun, p_int: int, zeta: complex) -> np.ndarray:
    """Map approximant (antiderivative of q^p from zeta) at the grid nodes.

    Evaluated without ever forming monomial coefficients: q^p is integrated
    along a straight anchor segment from zeta to the boundary-chain start,
    then cumulatively along the boundary itself.
    """
    g = qfun(grid.points) ** p_int
    z_start = grid.domain.arcs[0].point(0.0)
    anchor = _segment_integral(zeta, z_start, lambda z: qfun(z) ** p_int)
    return anchor + _cumulative_contour(grid, g)


@dataclass(frozen=True)
class RateConfig:
    domain_desc: dict
    p: float
    n_list: tuple
    panels_per_arc: int = 16
    points_per_panel: int = 16
    grading: float = 3.0
    reference: str = "oracle"  # 'oracle' | 'self'
    n_ref: int = 256
    zeros: bool = False
    k_max: int = 4
    leja_m: int = 128
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_list)
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigError("n_list must be strictly increasing")
        if self.p < 1.0:
            raise ConfigError("solver-backed sweeps need p >= 1")
        if self.reference not in ("oracle", "self"):
            raise ConfigError(f"unknown reference {self.reference!r}")
        object.__setattr__(self, "n_list", ns)


@dataclass(frozen=True)
class RateRow:
    n: int
    err_p: float
    err_sup: Optional[float] = None
    bound12: Optional[float] = None
    lead_coeff_scaled: Optional[float] = None
    zero_moment_gap: Optional[float] = None
    lead_coeff_abs: Optional[float] = None  # raw |leading coefficient|


@dataclass(frozen=True)
class FitResult:
    model: str
    params: dict
    goodness: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    R: float
    boundary_length: float
    capacity: float
    equilibrium: EquilibriumOracle
    config: RateConfig


def _is_integer_p(p: float) -> bool:
    return abs(p - round(p)) < 1e-12 and round(p) >= 1


def run_rate_sweep(config: RateConfig) -> SweepResult:
    """One degree sweep: errors, bounds, and diagnostics per degree."""
    domain = build_domain(config.domain_desc)
    grid = build_grid(domain, config.panels_per_arc, config.points_per_panel, config.grading)
    dense = build_grid(
        domain, 2 * config.panels_per_arc, min(2 * config.points_per_panel, 64), config.grading
    )
    zeta = domain.zeta
    p = config.p
    n_max = max(config.n_list)
    length = grid.boundary_length
    equil = leja_equilibrium(grid, config.leja_m, config.k_max)
    cap = equil.capacity_estimate

    sref: Optional[SelfReference] = None
    if config.reference == "oracle":
        ref = reference_for_domain(config.domain_desc)
        R = ref.R
        target = phi_prime_power(ref, grid.points, p)
        phi_dense = ref.phi(dense.points)
    else:
        sref = corner_reference(domain, config.n_ref, grading=config.grading)
        R = sref.R_hat

        def qref_fun(z):
            return szego_eval(sref.state, z, sref.n_ref)

        target = branch_power(qref_fun(grid.points) ** 2, 1.0 / p)
        phi_dense = _map_values(dense, qref_fun, 2, zeta)

    # solutions per degree; `evals` holds stable pointwise evaluators of each Q_n
    self_p2 = config.reference == "self" and abs(p - 2.0) < 1e-12
    polys = {}
    errs = {}
    evals = {}
    if abs(p - 2.0) < 1e-12:
        state = sref.state if self_p2 else make_szego_state(build_orthobasis(grid, zeta, n_max))
        for n in config.n_list:
            polys[n] = szego_polynomial(state, n)
            evals[n] = lambda z, n=n: szego_eval(state, z, n)
            if self_p2:
                gap = 2.0 * np.pi * (conformal_radius_estimate(state, n) - R)
                errs[n] = float(np.sqrt(max(gap, 0.0)))
            else:
                errs[n] = p_norm(grid, target - szego_values(state, n), 2.0)
    else:
        basis = build_constrained_basis(grid, zeta, n_max)

        def solve_one(n):
            return solve_best_approx(grid, zeta, n, p, target, basis=basis)

        if config.workers > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as ex:
                sols = list(ex.map(solve_one, config.n_list))
        else:
            sols = [solve_one(n) for n in config.n_list]
        for n, sol in zip(config.n_list, sols):
            polys[n] = sol.q
            errs[n] = sol.achieved_norm
            evals[n] = lambda z, n=n, c=sol.coeffs_in_basis: (
                1.0 + evaluate_constrained_basis(basis, z, n) @ c
            )

    rows = []
    pint = _is_integer_p(p)
    for n in config.n_list:
        q = polys[n]
        err_p = errs[n]
        err_sup = bound12 = None
        bound12 = 0.5 * (3.0 * (2.0 * np.pi * R) ** (1.0 / p) + length ** (1.0 / p)) ** (
            p - 1.0
        ) * err_p
        if pint:
            jdense = _map_values(dense, evals[n], int(round(p)), zeta)
            err_sup = float(np.max(np.abs(phi_dense - jdense)))
            if err_sup > BOUND_SLACK * bound12 + 1e-14:
                raise NumericalError(
                    "rate-sweep",
                    f"uniform-bound violation at n={n}: {err_sup:.3e} > {bound12:.3e}",
                )
        lead_abs = abs(complex(q.coeffs[n])) if q.degree >= n else 0.0
        lead_scaled = lead_abs ** (1.0 / n) * cap if lead_abs > 0 and n > 0 else 0.0
        gap = None
        if config.zeros:
            trimmed_deg = q.trimmed().degree
            if 8 <= trimmed_deg <= 64:
                try:
                    gap = zero_report(q, equil, config.k_max)
                except NumericalError:
                    gap = None
        rows.append(
            RateRow(
                n=n,
                err_p=err_p,
                err_sup=err_sup,
                bound12=bound12,
                lead_coeff_scaled=lead_scaled,
                zero_moment_gap=gap,
                lead_coeff_abs=lead_abs,
            )
        )
    return SweepResult(tuple(rows), R, length, cap, equil, config)


def fit_power_law(rows) -> FitResult:
    """Least-squares fit of log err_p against log n; exponent is -slope."""
    ns = np.array([r.n for r in rows if r.err_p > 1e-13], dtype=float)
    es = np.array([r.err_p for r in rows if r.err_p > 1e-13], dtype=float)
    if ns.size < 3:
        raise ConfigError("need >= 3 rows above the error floor to fit")
    x, y = np.log(ns), np.log(es)
    coef, cov = np.polyfit(x, y, 1, cov=True)
    resid = y - np.polyval(coef, x)
    rss = float(np.sum(resid**2))
    stderr = float(np.sqrt(cov[0, 0]))
    return FitResult(
        "power-law",
        {"exponent": float(-coef[0]), "stderr": stderr, "intercept": float(coef[1])},
        rss,
    )


STRETCH_R_GRID = tuple(np.round(np.arange(0.1, 0.95, 0.1), 1))


def fit_stretched_exp(rows) -> FitResult:
    """Grid-searched fit of log err = a + (log q) n^r over r in {0.1..0.9}.

    Also fits the power law on the same rows and records which model wins
    (strictly smaller log-space residual sum of squares).
    """
    sel = [(r.n, r.err_p) for r in rows if r.err_p > 1e-13]
    if len(sel) < 4:
        raise ConfigError("need >= 4 rows above the error floor to fit")
    ns = np.array([s[0] for s in sel], dtype=float)
    y = np.log(np.array([s[1] for s in sel], dtype=float))
    best = None
    for r in STRETCH_R_GRID:
        A = np.column_stack([np.ones_like(ns), ns**r])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        rss = float(np.sum((y - A @ coef) ** 2))
        if best is None or rss < best[0]:
            best = (rss, float(r), float(np.exp(coef[1])), float(coef[0]))
    power = fit_power_law(rows)
    rss, r, q, intercept = best
    preferred = "stretched" if rss < power.goodness else "power"
    return FitResult(
        "stretched-exponential",
        {
            "q": q,
            "r": r,
            "intercept": intercept,
            "power_goodness": power.goodness,
            "preferred": preferred,
        },
        rss,
    )


def zero_report(q_tilde: Poly, equil: EquilibriumOracle, k_max: int) -> float:
    """Max moment gap between the zero counting measure and the equilibrium proxy."""
    trimmed = q_tilde.trimmed()
    if trimmed.degree < 8:
        raise ConfigError(
            f"zero report needs degree >= 8 (got {trimmed.degree}; "
            "degenerate when the boundary map is already polynomial)"
        )
    zeros = find_roots(q_tilde, tol=1e-12)
    if not np.all(zeros.converged):
        raise NumericalError(
            "zero-report", f"{int(np.sum(~zeros.converged))} roots failed to converge"
        )
    mz = moments(zeros.roots, k_max, equil.center, equil.scale)
    return float(np.max(np.abs(mz - equil.moment_table[:k_max])))


def leading_coeff_report(rows, capacity: float):
    """Scaled leading-coefficient growth per row plus its top-half windowed max."""
    if capacity <= 0:
        raise ConfigError("capacity must be positive")
    vals = []
    for r in rows:
        la = r.lead_coeff_abs if r.lead_coeff_abs is not None else 0.0
        vals.append(la ** (1.0 / r.n) * capacity if la > 0 and r.n > 0 else 0.0)
    vals = np.asarray(vals)
    half = vals[len(vals) // 2 :]
    return vals, float(np.max(half))


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def write_csv(rows, path) -> None:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    _fmt(r.err_p),
                    _fmt(r.err_sup),
                    _fmt(r.bound12),
                    _fmt(r.lead_coeff_scaled),
                    _fmt(r.zero_moment_gap),
                ]
            )
        )
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def _fit_dict(fit: Optional[FitResult]):
    if fit is None:
        return None
    return {"model": fit.model, "params": fit.params, "goodness": fit.goodness}


def write_summary_json(result: SweepResult, fits: dict, path) -> None:
    payload = {
        "domain": result.config.domain_desc.get("name", result.config.domain_desc["kind"]),
        "p": result.config.p,
        "reference": result.config.reference,
        "R": result.R,
        "boundary_length": result.boundary_length,
        "capacity": result.capacity,
        "fits": {k: _fit_dict(v) for k, v in fits.items()},
        "rows": [
            {
                "n": r.n,
                "err_p": r.err_p,
                "err_sup": r.err_sup,
                "bound12": r.bound12,
                "lead_coeff_scaled": r.lead_coeff_scaled,
                "zero_moment_gap": r.zero_moment_gap,
            }
            for r in result.rows
        ],
    }
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def write_svg(rows, path, title: str = "error vs degree") -> None:
    """Minimal self-contained log-log SVG plot of err_p against n."""
    pts = [(r.n, r.err_p) for r in rows if r.err_p > 0]
    if not pts:
        raise ConfigError("no positive errors to plot")
    lx = np.log10([p[0] for p in pts])
    ly = np.log10([p[1] for p in pts])
    W, H, M = 480, 360, 50

    def sx(v):
        lo, hi = lx.min(), max(lx.max(), lx.min() + 1e-9)
        return M + (W - 2 * M) * (v - lo) / (hi - lo)

    def sy(v):
        lo, hi = ly.min(), max(ly.max(), ly.min() + 1e-9)
        return H - M - (H - 2 * M) * (v - lo) / (hi - lo)

    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(lx, ly))
    marks = "".join(
        f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#1f77b4"/>'
        for x, y in zip(lx, ly)
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">'
        f'<rect width="{W}" height="{H}" fill="white"/>'
        f'<polyline points="{poly}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
        f"{marks}"
        f'<text x="{W / 2:.0f}" y="{H - 10}" text-anchor="middle" font-size="12">log10 n</text>'
        f'<text x="15" y="{H / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {H / 2:.0f})">log10 err_p</text>'
        f'<text x="{W / 2:.0f}" y="20" text-anchor="middle" font-size="13">{title}</text>'
        "</svg>\n"
    )
    with open(path, "w") as f:
        f.write(svg)
