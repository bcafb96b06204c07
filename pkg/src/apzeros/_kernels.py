"""Hot float kernels for the non-rigorous zero scan.

Plain float64 arithmetic: the scan only proposes candidates, certification
re-derives everything in ball arithmetic.  Kernels are numba-compiled when
available; set ``APZEROS_NO_NUMBA=1`` to force the pure-numpy fallback
(``benchmarks/bench_search_kernels.py`` compares the two).
"""

from __future__ import annotations

import os

import numpy as np

STATUS_OK = 0
STATUS_LEFT_STRIP = 1
STATUS_ZERO_DERIV = 2

_CONV_TOL = 1e-13

USE_NUMBA = os.environ.get("APZEROS_NO_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def sum_and_deriv(gam, are, aim, x, y):
    """F(x+iy) and F'(x+iy) for F = sum a_n e^(i g_n z); returns 4 floats."""
    fr = 0.0
    fi = 0.0
    dr = 0.0
    di = 0.0
    for n in range(gam.shape[0]):
        g = gam[n]
        e = np.exp(-g * y)
        c = np.cos(g * x) * e
        s = np.sin(g * x) * e
        tr = are[n] * c - aim[n] * s
        ti = are[n] * s + aim[n] * c
        fr += tr
        fi += ti
        dr -= g * ti
        di += g * tr
    return fr, fi, dr, di


@njit(cache=True)
def newton_run(gam, are, aim, t0, y0, max_iter, y_cap):
    """Newton iteration from t0 + i y0.

    Returns (x, y, iterations, status, last_step).  Aborts when the iterate
    leaves the strip 0 < Im z < y_cap or the derivative vanishes.
    """
    x = t0
    y = y0
    last = 0.0
    it = 0
    while it < max_iter:
        fr, fi, dr, di = sum_and_deriv(gam, are, aim, x, y)
        d2 = dr * dr + di * di
        if d2 == 0.0:
            return x, y, it, STATUS_ZERO_DERIV, last
        sx = (fr * dr + fi * di) / d2
        sy = (fi * dr - fr * di) / d2
        x -= sx
        y -= sy
        it += 1
        last = np.hypot(sx, sy)
        if y < 0.0 or y > y_cap:
            return x, y, it, STATUS_LEFT_STRIP, last
        if last < _CONV_TOL * (1.0 + np.hypot(x, y)):
            break
    return x, y, it, STATUS_OK, last


@njit(cache=True)
def scan_grid(gam, are, aim, starts, y0, max_iter, y_cap):
    m = starts.shape[0]
    xs = np.empty(m)
    ys = np.empty(m)
    its = np.empty(m, dtype=np.int64)
    status = np.empty(m, dtype=np.int64)
    steps = np.empty(m)
    for i in range(m):
        x, y, it, st, last = newton_run(gam, are, aim, starts[i], y0, max_iter, y_cap)
        xs[i] = x
        ys[i] = y
        its[i] = it
        status[i] = st
        steps[i] = last
    return xs, ys, its, status, steps


def sum_and_deriv_np(gam, are, aim, x, y):
    """Vectorized fallback; semantics match :func:`sum_and_deriv`."""
    e = np.exp(-gam * y)
    c = np.cos(gam * x) * e
    s = np.sin(gam * x) * e
    tr = are * c - aim * s
    ti = are * s + aim * c
    return tr.sum(), ti.sum(), -(gam * ti).sum(), (gam * tr).sum()


def _newton_run_np(gam, are, aim, t0, y0, max_iter, y_cap):
    x, y, last, it = t0, y0, 0.0, 0
    while it < max_iter:
        fr, fi, dr, di = sum_and_deriv_np(gam, are, aim, x, y)
        d2 = dr * dr + di * di
        if d2 == 0.0:
            return x, y, it, STATUS_ZERO_DERIV, last
        sx = (fr * dr + fi * di) / d2
        sy = (fi * dr - fr * di) / d2
        x -= sx
        y -= sy
        it += 1
        last = float(np.hypot(sx, sy))
        if y < 0.0 or y > y_cap:
            return x, y, it, STATUS_LEFT_STRIP, last
        if last < _CONV_TOL * (1.0 + float(np.hypot(x, y))):
            break
    return x, y, it, STATUS_OK, last


def scan_grid_np(gam, are, aim, starts, y0, max_iter, y_cap):
    m = starts.shape[0]
    xs = np.empty(m)
    ys = np.empty(m)
    its = np.empty(m, dtype=np.int64)
    status = np.empty(m, dtype=np.int64)
    steps = np.empty(m)
    for i in range(m):
        x, y, it, st, last = _newton_run_np(gam, are, aim, starts[i], y0, max_iter, y_cap)
        xs[i], ys[i], its[i], status[i], steps[i] = x, y, it, st, last
    return xs, ys, its, status, steps


def run_scan(gam, are, aim, starts, y0, max_iter, y_cap):
    """Dispatch to the compiled kernel or the numpy fallback."""
    if USE_NUMBA:
        return scan_grid(gam, are, aim, starts, y0, max_iter, y_cap)
    return scan_grid_np(gam, are, aim, starts, y0, max_iter, y_cap)


def run_newton(gam, are, aim, t0, y0, max_iter, y_cap):
    if USE_NUMBA:
        return newton_run(gam, are, aim, t0, y0, max_iter, y_cap)
    return _newton_run_np(gam, are, aim, t0, y0, max_iter, y_cap)


def point_eval(gam, are, aim, x, y):
    if USE_NUMBA:
        return sum_and_deriv(gam, are, aim, x, y)
    return sum_and_deriv_np(gam, are, aim, x, y)
