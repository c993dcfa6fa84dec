"""Benchmark the compiled hot kernels against the plain-numpy fallback.

The kernel implementation is selected at import time by the environment
variable JULIAPOLY_NO_NUMBA; this script therefore runs each variant in a
fresh subprocess and compares wall times for the two hot loops: Aberth
root finding and greedy Leja point selection.

Usage:
    python benchmarks/bench_kernels.py [--degrees 32 64 96] [--leja-m 128 256]
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from juliapoly import Poly, find_roots, build_domain, build_grid
    from juliapoly import _kernels
    from juliapoly.oracle import leja_points_from

    spec = json.loads(sys.argv[1])
    rng = np.random.default_rng(42)
    out = {"numba": bool(_kernels.USE_NUMBA), "aberth": {}, "leja": {}}

    # warm-up so jit compilation never lands inside a timed region
    find_roots(Poly(0.0, rng.standard_normal(9) + 1j * rng.standard_normal(9)))

    for deg in spec["degrees"]:
        c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        c[-1] += 2.0
        q = Poly(0.1 + 0.1j, c)
        t0 = time.perf_counter()
        for _ in range(spec["repeat"]):
            zs = find_roots(q)
        out["aberth"][str(deg)] = (time.perf_counter() - t0) / spec["repeat"]
        assert np.all(zs.converged)

    desc = {"kind": "polygon", "params": {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
            "zeta": [0.5, 0.5], "name": "square"}
    grid = build_grid(build_domain(desc), 32, 16)
    leja_points_from(grid.points, 16)  # warm-up
    for m in spec["leja_m"]:
        t0 = time.perf_counter()
        for _ in range(spec["repeat"]):
            pts = leja_points_from(grid.points, m)
        out["leja"][str(m)] = (time.perf_counter() - t0) / spec["repeat"]

    print(json.dumps(out))
    """
)


def run_variant(no_numba: bool, spec: dict) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["JULIAPOLY_NO_NUMBA"] = "1"
    else:
        env.pop("JULIAPOLY_NO_NUMBA", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(spec)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--degrees", type=int, nargs="+", default=[16, 32, 64, 96])
    parser.add_argument("--leja-m", type=int, nargs="+", default=[64, 128, 256])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    spec = {"degrees": args.degrees, "leja_m": args.leja_m, "repeat": args.repeat}

    fast = run_variant(no_numba=False, spec=spec)
    slow = run_variant(no_numba=True, spec=spec)
    assert fast["numba"] and not slow["numba"], "variant selection failed"

    print(f"{'kernel':<22}{'compiled [ms]':>14}{'numpy [ms]':>12}{'speedup':>9}")
    for deg in args.degrees:
        a, b = fast["aberth"][str(deg)], slow["aberth"][str(deg)]
        print(f"aberth deg={deg:<12}{a * 1e3:>14.3f}{b * 1e3:>12.3f}{b / a:>9.2f}")
    for m in args.leja_m:
        a, b = fast["leja"][str(m)], slow["leja"][str(m)]
        print(f"leja m={m:<14}{a * 1e3:>14.3f}{b * 1e3:>12.3f}{b / a:>9.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
