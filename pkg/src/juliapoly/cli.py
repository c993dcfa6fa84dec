"""Command-line orchestration: validate domains, compute maps, run sweeps.

One JSON config per run; flags only override keys and choose paths.  The
config is copied into the output directory so the run is reproducible from
its artifacts alone.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

import numpy as np

from .errors import ConfigError, NumericalError
from .experiments import (
    RateConfig,
    fit_power_law,
    fit_stretched_exp,
    run_rate_sweep,
    write_csv,
    write_summary_json,
    write_svg,
)
from .extremal import solve_best_approx
from .geom import build_domain, min_exterior_angle
from .oracle import branch_power, corner_reference, phi_prime_power, reference_for_domain
from .ortho import (
    build_orthobasis,
    make_szego_state,
    map_approximant,
    szego_eval,
    szego_polynomial,
)
from .quad import build_grid, integrate

CONFIG_KEYS = {
    "name",
    "domain",
    "p",
    "n_list",
    "quadrature",
    "reference",
    "n_ref",
    "zeros",
    "k_max",
    "leja_m",
    "seed",
    "workers",
    "map",
}

BUILTIN_CONFIGS = ("disk", "ellipse", "square", "lshape", "cusp")


def builtin_config_path(name: str):
    """Path of a packaged example config ('disk', 'ellipse', ...)."""
    if name not in BUILTIN_CONFIGS:
        raise ConfigError(f"unknown built-in config {name!r} (have {BUILTIN_CONFIGS})")
    return resources.files("juliapoly").joinpath(f"configs/{name}.json")


def load_config(path_or_name: str) -> dict:
    if os.path.exists(path_or_name):
        with open(path_or_name) as f:
            cfg = json.load(f)
    elif path_or_name in BUILTIN_CONFIGS:
        cfg = json.loads(builtin_config_path(path_or_name).read_text())
    else:
        raise ConfigError(f"config file not found: {path_or_name}")
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(cfg) - CONFIG_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    if "domain" not in cfg:
        raise ConfigError("config is missing the 'domain' section")
    return cfg


def apply_overrides(cfg: dict, overrides) -> dict:
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return cfg


def _rate_config(cfg: dict, workers: int) -> RateConfig:
    quad = cfg.get("quadrature", {})
    return RateConfig(
        domain_desc=cfg["domain"],
        p=float(cfg.get("p", 2.0)),
        n_list=tuple(cfg.get("n_list", (8, 16, 32))),
        panels_per_arc=int(quad.get("panels_per_arc", 16)),
        points_per_panel=int(quad.get("points_per_panel", 16)),
        grading=float(quad.get("grading", 3.0)),
        reference=cfg.get("reference", "oracle"),
        n_ref=int(cfg.get("n_ref", 256)),
        zeros=bool(cfg.get("zeros", False)),
        k_max=int(cfg.get("k_max", 4)),
        leja_m=int(cfg.get("leja_m", 128)),
        seed=int(cfg.get("seed", 0)),
        workers=workers,
    )


def _prepare_out(cfg: dict, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "config.json"), "w") as f:
        json.dump(cfg, f, indent=2, sort_keys=True)
        f.write("\n")
    return out_dir


def cmd_validate(cfg: dict, out_dir: str, workers: int) -> int:
    rc = _rate_config(cfg, workers)
    domain = build_domain(rc.domain_desc)
    grid = build_grid(domain, rc.panels_per_arc, rc.points_per_panel, rc.grading)
    closed = integrate(grid, np.ones(grid.size), "complex_dz")
    cauchy = integrate(grid, 1.0 / (grid.points - domain.zeta), "complex_dz")
    lam = min_exterior_angle(domain)
    print(f"domain: {domain.name}")
    print(f"arcs: {domain.n_arcs}  corners: {len(domain.corners)}")
    print(f"perimeter: {grid.boundary_length:.12g}")
    print(f"closure integral |sum dz|: {abs(closed):.3e}")
    print(f"cauchy integral error: {abs(cauchy - 2j * np.pi):.3e}")
    print(f"min exterior angle fraction: {'analytic boundary' if lam is None else lam}")
    return 0


def _map_solution(cfg: dict, rc: RateConfig):
    mp = cfg.get("map", {})
    n = int(mp.get("n", 8))
    p = float(mp.get("p", rc.p))
    if not _is_int(p):
        raise ConfigError("map command needs integer p (polynomial antiderivative)")
    domain = build_domain(rc.domain_desc)
    grid = build_grid(domain, rc.panels_per_arc, rc.points_per_panel, rc.grading)
    if abs(p - 2.0) < 1e-12:
        state = make_szego_state(build_orthobasis(grid, domain.zeta, n))
        q = szego_polynomial(state, n)
    else:
        if rc.domain_desc["kind"] in ("disk", "polyimage"):
            ref = reference_for_domain(rc.domain_desc)
            target = phi_prime_power(ref, grid.points, p)
        else:
            sref = corner_reference(domain, rc.n_ref, grading=rc.grading)
            target = branch_power(szego_eval(sref.state, grid.points, sref.n_ref) ** 2, 1.0 / p)
        q = solve_best_approx(grid, domain.zeta, n, p, target).q
    jmap = map_approximant(q, int(round(p)))
    return domain, grid, q, jmap


def _is_int(p: float) -> bool:
    return abs(p - round(p)) < 1e-12


def _sample_row(kind: str, z, w) -> str:
    z, w = complex(z), complex(w)
    return f"{kind},{z.real!r},{z.imag!r},{w.real!r},{w.imag!r}"


def cmd_map(cfg: dict, out_dir: str, workers: int) -> int:
    rc = _rate_config(cfg, workers)
    domain, grid, q, jmap = _map_solution(cfg, rc)
    rows = ["kind,re_z,im_z,re_w,im_w"]
    bpts = grid.points
    for z, wv in zip(bpts, jmap(bpts)):
        rows.append(_sample_row("boundary", z, wv))
    inner = []
    for s in (0.25, 0.5, 0.75):
        inner.extend(domain.zeta + s * (bpts[:: max(1, bpts.size // 64)] - domain.zeta))
    for z in inner:
        rows.append(_sample_row("interior", z, jmap(z)))
    with open(os.path.join(out_dir, "map_samples.csv"), "w") as f:
        f.write("\n".join(rows) + "\n")
    print(f"wrote {os.path.join(out_dir, 'map_samples.csv')} ({len(rows) - 1} samples)")
    return 0


def cmd_rates(cfg: dict, out_dir: str, workers: int) -> int:
    rc = _rate_config(cfg, workers)
    result = run_rate_sweep(rc)
    fits = {}
    try:
        fits["power_law"] = fit_power_law(result.rows)
    except ConfigError:
        fits["power_law"] = None
    try:
        fits["stretched_exp"] = fit_stretched_exp(result.rows)
    except ConfigError:
        fits["stretched_exp"] = None
    write_csv(result.rows, os.path.join(out_dir, "rates.csv"))
    write_summary_json(result, fits, os.path.join(out_dir, "summary.json"))
    write_svg(
        result.rows,
        os.path.join(out_dir, "rates.svg"),
        title=f"{cfg.get('name', 'run')}: p={rc.p}",
    )
    print(f"wrote rates.csv, summary.json, rates.svg under {out_dir}")
    return 0


def cmd_zeros(cfg: dict, out_dir: str, workers: int) -> int:
    rc = _rate_config(cfg, workers)
    rc = RateConfig(**{**rc.__dict__, "zeros": True})
    result = run_rate_sweep(rc)
    gaps = {str(r.n): r.zero_moment_gap for r in result.rows}
    finite = [g for g in gaps.values() if g is not None]
    payload = {
        "domain": cfg.get("name", rc.domain_desc["kind"]),
        "p": rc.p,
        "k_max": rc.k_max,
        "capacity": result.capacity,
        "zero_moment_gap_by_n": gaps,
        "best_gap": min(finite) if finite else None,
    }
    with open(os.path.join(out_dir, "zeros.json"), "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote zeros.json under {out_dir}; best gap: {payload['best_gap']}")
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "map": cmd_map,
    "rates": cmd_rates,
    "zeros": cmd_zeros,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="juliapoly",
        description="Boundary-extremal polynomial conformal mapping toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="config path or built-in name")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), getattr(args, "set"))
        out_dir = _prepare_out(cfg, args.out)
        return COMMANDS[args.command](cfg, out_dir, args.workers)
    except (ConfigError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"error[config]: {e}", file=sys.stderr)
        return 1
    except NumericalError as e:
        print(f"error[{e.stage}]: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
