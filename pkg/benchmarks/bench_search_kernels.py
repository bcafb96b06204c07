#!/usr/bin/env python3
"""Compare the numba scan kernels against the pure-numpy fallback.

Runs the same grid scan through both paths and reports wall times and the
agreement of the results.  The dispatch flag is decided at import time, so
the numpy path is exercised here by calling its functions directly; to run
the whole package without numba set APZEROS_NO_NUMBA=1.
"""

import argparse
import time

import numpy as np

from apzeros import _kernels
from apzeros.zerotable import load_bundled_search_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tmin", type=float, default=14600.0)
    ap.add_argument("--tmax", type=float, default=14800.0)
    ap.add_argument("--order", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    table = load_bundled_search_table()
    cache = table.coefficients()
    n = args.order
    gam = np.array([float(g.mid) for g in cache.gammas[:n]])
    are = np.array([float(a.re.mid) for a in cache.coeffs[:n]])
    aim = np.array([float(a.im.mid) for a in cache.coeffs[:n]])
    starts = np.arange(args.tmin, args.tmax, 0.1)
    print(f"{len(starts)} grid starts, {n} terms, numba available: {_kernels.USE_NUMBA}")

    results = {}
    if _kernels.USE_NUMBA:
        _kernels.scan_grid(gam, are, aim, starts[:4], 0.04, 25, 0.085)  # compile
        best = min(
            _timed(_kernels.scan_grid, gam, are, aim, starts, results, "numba")
            for _ in range(args.repeat)
        )
        print(f"numba kernels : {best:8.3f} s")
    best_np = min(
        _timed(_kernels.scan_grid_np, gam, are, aim, starts, results, "numpy")
        for _ in range(args.repeat)
    )
    print(f"numpy fallback: {best_np:8.3f} s")

    if "numba" in results and "numpy" in results:
        a, b = results["numba"], results["numpy"]
        ok = np.array_equal(a[3], b[3])
        conv = a[3] == _kernels.STATUS_OK
        dx = float(np.max(np.abs(a[0][conv] - b[0][conv]))) if conv.any() else 0.0
        print(f"status agreement: {ok}; max |dx| on converged starts: {dx:.2e}")
        print(f"speedup: {best_np / best:.1f}x")


def _timed(fn, gam, are, aim, starts, results, label):
    t0 = time.perf_counter()
    out = fn(gam, are, aim, starts, 0.04, 25, 0.085)
    dt = time.perf_counter() - t0
    results[label] = out
    return dt


if __name__ == "__main__":
    main()
