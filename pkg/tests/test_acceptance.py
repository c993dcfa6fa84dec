"""End-to-end acceptance checks, one test per criterion.

Each test prints a single pass/fail line so the run log reads as a
checklist.  Expensive sweeps are shared through module-scoped fixtures.
"""

import numpy as np
import pytest

from juliapoly import (
    RateConfig,
    build_domain,
    build_grid,
    build_orthobasis,
    fit_power_law,
    fit_stretched_exp,
    make_problem,
    make_reference,
    make_szego_state,
    map_approximant,
    optimality_check,
    p_norm,
    phi_prime_power,
    run_rate_sweep,
    solve_best_approx,
    solve_min_norm,
    solve_problem,
    szego_polynomial,
)
from juliapoly.experiments import leading_coeff_report, write_csv
from juliapoly.extremal import _objective
from juliapoly.ortho import szego_values
from conftest import CUSP, DISK, ELLIPSE, SQUARE


def _report(num, label, ok, detail=""):
    print(f"criterion {num:02d} ({label}): {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"criterion {num:02d} ({label}) failed: {detail}"


@pytest.fixture(scope="module")
def square_sweep_p2():
    cfg = RateConfig(domain_desc=SQUARE, p=2.0, n_list=(8, 16, 32, 64, 96), reference="self")
    return run_rate_sweep(cfg)


@pytest.fixture(scope="module")
def square_sweep_p1():
    cfg = RateConfig(domain_desc=SQUARE, p=1.0, n_list=(8, 16, 32, 64), reference="self")
    return run_rate_sweep(cfg)


@pytest.fixture(scope="module")
def square_zero_sweep():
    cfg = RateConfig(
        domain_desc=SQUARE, p=2.0, n_list=(16, 24, 32, 48, 64), reference="self", zeros=True
    )
    return run_rate_sweep(cfg)


@pytest.fixture(scope="module")
def cusp_sweep():
    cfg = RateConfig(domain_desc=CUSP, p=2.0, n_list=(8, 16, 32, 64), reference="self")
    return run_rate_sweep(cfg)


@pytest.fixture(scope="module")
def ellipse_sweeps():
    return {
        p: run_rate_sweep(RateConfig(domain_desc=ELLIPSE, p=p, n_list=(2, 4, 8, 16, 32)))
        for p in (1.0, 2.0)
    }


def test_01_disk_degeneracy(grids):
    grid = grids["disk"]
    worst_coeff = worst_err = worst_sup = 0.0
    for p in (1.0, 2.0, 3.0):
        target = np.ones(grid.size, dtype=complex)
        for n in (1, 2, 4, 8):
            for sol in (
                solve_min_norm(grid, grid.zeta, n, p),
                solve_best_approx(grid, grid.zeta, n, p, target),
            ):
                ideal = np.zeros(n + 1)
                ideal[0] = 1.0
                worst_coeff = max(worst_coeff, float(np.max(np.abs(sol.q.coeffs - ideal))))
            qb = solve_best_approx(grid, grid.zeta, n, p, target)
            worst_err = max(worst_err, qb.achieved_norm)
            jmap = map_approximant(qb.q, int(p))
            worst_sup = max(worst_sup, float(np.max(np.abs(jmap(grid.points) - grid.points))))
    ok = worst_coeff <= 1e-8 and worst_err <= 1e-8 and worst_sup <= 1e-8
    _report(1, "disk degeneracy", ok, f"coeff={worst_coeff:.1e} sup={worst_sup:.1e}")


def test_02_extremal_norm_identity(grids):
    refs = [
        ("disk", grids["disk"], make_reference("disk", {"radius": 1.0})),
        ("ellipse", grids["ellipse"], make_reference("polyimage", {"coeffs": [[0.25, 0.0]]})),
        (
            "wavy",
            None,
            make_reference("polyimage", {"coeffs": [[0.1, 0.0], [0.08, 0.02]]}),
        ),
    ]
    worst = 0.0
    for name, grid, ref in refs:
        if grid is None:
            desc = {
                "kind": "polyimage",
                "params": {"coeffs": [[0.1, 0.0], [0.08, 0.02]]},
                "zeta": [0.0, 0.0],
                "name": name,
            }
            grid = build_grid(build_domain(desc))
        for p in (1.0, 2.0, 3.0):
            got = p_norm(grid, phi_prime_power(ref, grid.points, p), p)
            want = (2.0 * np.pi * ref.R) ** (1.0 / p)
            worst = max(worst, abs(got - want) / want)
    _report(2, "extremal norm identity", worst <= 1e-6, f"rel err={worst:.2e}")


def test_03_p2_solver_equals_closed_form(grids):
    worst_norm = worst_coeff = 0.0
    for name in ("ellipse", "square"):
        grid = grids[name]
        state = make_szego_state(build_orthobasis(grid, grid.zeta, 32))
        for n in (8, 16, 32):
            sol = solve_min_norm(grid, grid.zeta, n, 2.0)
            closed = p_norm(grid, szego_values(state, n), 2.0)
            worst_norm = max(worst_norm, abs(sol.achieved_norm - closed) / closed)
            q2 = szego_polynomial(state, n)
            worst_coeff = max(worst_coeff, float(np.max(np.abs(sol.q.coeffs - q2.coeffs))))
    ok = worst_norm <= 1e-7 and worst_coeff <= 1e-6
    _report(3, "p=2 closed-form equivalence", ok, f"norm={worst_norm:.1e} coeff={worst_coeff:.1e}")


def test_04_uniform_bound_rowwise(ellipse_sweeps, square_sweep_p2, square_sweep_p1):
    sweeps = [ellipse_sweeps[1.0], ellipse_sweeps[2.0], square_sweep_p2, square_sweep_p1]
    worst_ratio, rows_checked = 0.0, 0
    for res in sweeps:
        for r in res.rows:
            assert r.err_sup is not None and r.bound12 is not None
            worst_ratio = max(worst_ratio, r.err_sup / r.bound12)
            rows_checked += 1
    ok = worst_ratio <= 1.05 and rows_checked >= 16
    _report(4, "uniform-norm bound", ok, f"max err_sup/bound={worst_ratio:.3f}")


def test_05_norm_sandwich(grids):
    worst_low = worst_high = 0.0
    for name, desc in (("disk", DISK), ("ellipse", ELLIPSE)):
        grid = grids[name]
        kind = "disk" if desc["kind"] == "disk" else "polyimage"
        R = make_reference(kind, desc["params"]).R
        length = grid.boundary_length
        for p in (1.0, 1.5, 2.0, 3.0):
            for n in (4, 8, 16, 32):
                a = solve_min_norm(grid, grid.zeta, n, p).achieved_norm
                worst_low = max(worst_low, (2.0 * np.pi * R) ** (1.0 / p) - a)
                worst_high = max(worst_high, a - length ** (1.0 / p))
    ok = worst_low <= 1e-6 and worst_high <= 1e-6
    _report(5, "norm sandwich", ok, f"low={worst_low:.1e} high={worst_high:.1e}")


def test_06_corner_rate_exponent(square_sweep_p2):
    fit = fit_power_law(square_sweep_p2.rows)
    expo = fit.params["exponent"]
    _report(6, "corner rate exponent", 1.0 <= expo <= 2.0, f"exponent={expo:.3f}")


def test_07_cusp_superpolynomial_decay(cusp_sweep):
    fit = fit_stretched_exp(cusp_sweep.rows)
    errs = [r.err_p for r in cusp_sweep.rows]
    ratios = [b / a for a, b in zip(errs, errs[1:])]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    ok = fit.params["preferred"] == "stretched" and decreasing
    detail = f"preferred={fit.params['preferred']} ratios=" + ",".join(
        f"{r:.3f}" for r in ratios
    )
    _report(7, "cusp decay model", ok, detail)


def test_08_leading_coefficient_capacity_trend(square_sweep_p2):
    _, windowed = leading_coeff_report(square_sweep_p2.rows, square_sweep_p2.capacity)
    ok = 0.7 <= windowed <= 1.3
    _report(8, "leading coefficient vs capacity", ok, f"windowed max={windowed:.3f}")


def test_09_zero_moment_proximity(square_zero_sweep):
    gaps = [r.zero_moment_gap for r in square_zero_sweep.rows if r.zero_moment_gap is not None]
    best = min(gaps) if gaps else np.inf
    ok = len(gaps) >= 3 and best <= 0.15
    _report(9, "zero moment proximity", ok, f"best gap={best:.3f}")


def test_10_infrastructure(grids, tmp_path):
    from juliapoly import build_grid as _bg, integrate

    checks = {}
    # orthonormality at high degree on a corner domain
    basis = build_orthobasis(grids["square"], grids["square"].zeta, 100)
    checks["gram"] = basis.gram_residual <= 1e-8
    # contour identity on every family
    worst_cauchy = 0.0
    for grid in grids.values():
        got = integrate(grid, 1.0 / (grid.points - grid.zeta), "complex_dz")
        worst_cauchy = max(worst_cauchy, abs(got - 2j * np.pi))
    checks["cauchy"] = worst_cauchy <= 1e-7
    # converged solver with verified stationarity, plus a planted bad solution
    problem = make_problem(grids["ellipse"], 0.0j, 6, 1.5)
    sol = solve_problem(problem)
    checks["irls"] = sol.stationarity < 1e-8
    checks["optimal"] = optimality_check(problem, sol, trials=20, seed=3) >= -1e-7
    import dataclasses

    bad_c = sol.coeffs_in_basis + 0.2
    bad = dataclasses.replace(
        sol, coeffs_in_basis=bad_c, achieved_norm=_objective(problem, bad_c)
    )
    checks["planted"] = optimality_check(problem, bad, trials=20, seed=3) < -1e-4
    # byte-identical reruns of a full sweep
    blobs = []
    for tag in ("a", "b"):
        res = run_rate_sweep(RateConfig(domain_desc=ELLIPSE, p=2.0, n_list=(2, 4, 8)))
        path = tmp_path / f"{tag}.csv"
        write_csv(res.rows, path)
        blobs.append(path.read_bytes())
    checks["determinism"] = blobs[0] == blobs[1]
    ok = all(checks.values())
    _report(10, "infrastructure", ok, " ".join(f"{k}={v}" for k, v in checks.items()))
