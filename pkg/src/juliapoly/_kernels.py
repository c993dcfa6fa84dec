"""Hot numeric inner loops, numba-compiled with a pure-numpy fallback.

The fallback is selected by setting the environment variable
``JULIAPOLY_NO_NUMBA=1`` before import.  Both paths implement identical
arithmetic (Jacobi-style simultaneous updates, fixed summation order) so
results are deterministic on either path.  ``benchmarks/bench_kernels.py``
times one against the other.
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("JULIAPOLY_NO_NUMBA", "0").lower() not in ("1", "true", "yes")


def _aberth_np(coeffs, dcoeffs, roots, tol, max_sweeps):
    """Simultaneous Aberth-Ehrlich iteration, vectorized over roots.

    coeffs/dcoeffs are ascending; roots is modified in place.
    Returns (sweeps_used, last_corrections).
    """
    n = roots.size
    corr = np.full(n, np.inf)
    for sweep in range(max_sweeps):
        pv = np.full(n, coeffs[-1], dtype=np.complex128)
        for c in coeffs[-2::-1]:
            pv = pv * roots + c
        dv = np.full(n, dcoeffs[-1], dtype=np.complex128)
        for c in dcoeffs[-2::-1]:
            dv = dv * roots + c
        dv = np.where(dv == 0, 1e-300, dv)
        w = pv / dv
        diff = roots[:, None] - roots[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-300, denom)
        corr = w / denom
        roots -= corr
        if np.max(np.abs(corr)) < tol:
            return sweep + 1, np.abs(corr)
    return max_sweeps, np.abs(corr)


def _leja_np(points, first, m):
    """Greedy Leja selection from candidate points.

    Returns indices of the m selected points.  Candidates maximize the
    running product of distances to the already-chosen set (log-sum form).
    """
    idx = np.empty(m, dtype=np.int64)
    idx[0] = first
    d = np.abs(points - points[first])
    logsum = np.where(d > 0, np.log(np.where(d > 0, d, 1.0)), -np.inf)
    logsum[first] = -np.inf
    for j in range(1, m):
        i = int(np.argmax(logsum))
        if not np.isfinite(logsum[i]):
            raise ValueError("leja selection exhausted distinct grid points")
        idx[j] = i
        d = np.abs(points - points[i])
        logsum = logsum + np.where(d > 0, np.log(np.where(d > 0, d, 1.0)), -np.inf)
        logsum[i] = -np.inf
    return idx


if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _aberth_nb(coeffs, dcoeffs, roots, tol, max_sweeps):
        n = roots.size
        corr = np.empty(n, dtype=np.complex128)
        new = np.empty(n, dtype=np.complex128)
        last = np.full(n, np.inf)
        for sweep in range(max_sweeps):
            maxcorr = 0.0
            for j in range(n):
                z = roots[j]
                pv = coeffs[-1]
                for k in range(len(coeffs) - 2, -1, -1):
                    pv = pv * z + coeffs[k]
                dv = dcoeffs[-1]
                for k in range(len(dcoeffs) - 2, -1, -1):
                    dv = dv * z + dcoeffs[k]
                if dv == 0:
                    dv = 1e-300 + 0j
                w = pv / dv
                s = 0j
                for k in range(n):
                    if k != j:
                        s += 1.0 / (z - roots[k])
                denom = 1.0 - w * s
                if denom == 0:
                    denom = 1e-300 + 0j
                corr[j] = w / denom
                new[j] = z - corr[j]
                a = abs(corr[j])
                last[j] = a
                if a > maxcorr:
                    maxcorr = a
            roots[:] = new
            if maxcorr < tol:
                return sweep + 1, last
        return max_sweeps, last

    @njit(cache=True)
    def _leja_core_nb(points, first, m):
        npts = points.size
        idx = np.empty(m, dtype=np.int64)
        idx[0] = first
        logsum = np.empty(npts)
        for i in range(npts):
            d = abs(points[i] - points[first])
            logsum[i] = np.log(d) if d > 0 else -np.inf
        logsum[first] = -np.inf
        for j in range(1, m):
            best = 0
            bestval = -np.inf
            for i in range(npts):
                if logsum[i] > bestval:
                    bestval = logsum[i]
                    best = i
            if bestval == -np.inf:
                return idx[:j]
            idx[j] = best
            for i in range(npts):
                d = abs(points[i] - points[best])
                logsum[i] += np.log(d) if d > 0 else -np.inf
            logsum[best] = -np.inf
        return idx

    def aberth_iterate(coeffs, dcoeffs, roots, tol, max_sweeps):
        return _aberth_nb(
            np.ascontiguousarray(coeffs, dtype=np.complex128),
            np.ascontiguousarray(dcoeffs, dtype=np.complex128),
            roots, tol, max_sweeps,
        )

    def leja_select(points, first, m):
        idx = _leja_core_nb(np.ascontiguousarray(points, dtype=np.complex128), first, m)
        if idx.size < m:
            raise ValueError("leja selection exhausted distinct grid points")
        return idx

else:

    def aberth_iterate(coeffs, dcoeffs, roots, tol, max_sweeps):
        return _aberth_np(
            np.asarray(coeffs, dtype=np.complex128),
            np.asarray(dcoeffs, dtype=np.complex128),
            roots, tol, max_sweeps,
        )

    def leja_select(points, first, m):
        return _leja_np(np.asarray(points, dtype=np.complex128), first, m)
