"""Non-rigorous Newton scan for zeros with large imaginary part.

Grid starts ``t + i y_start`` spaced along the real axis are iterated with
Newton-Raphson on the truncated sum; runs that leave the strip
``0 < Im z < y_cap`` are aborted as divergent.  Survivors are deduplicated,
ranked by descending imaginary part, and the best one is polished with extra
iterations.  A contour-proposal step then derives, still in floats, the
rectangle and truncation order the certification stage should try, together
with estimates of every contour constant and the resulting density exponent.

Everything here is float64; the rigorous pipeline re-derives all of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from ._kernels import STATUS_OK

RESIDUAL_TOL = 1e-8
BISECT_TOL = 1e-12
DEDUP_TOL = 1e-4
Y1_PROBE_SPAN = 0.1
Y1_PROBE_STEP = 1e-3
X_HALF_WIDTH = 0.05
Q0_LIMIT = 10**6


class SearchError(RuntimeError):
    pass


class NoMaximumError(SearchError):
    """No interior maximum of the vertical-line modulus above the zero."""


class NoMatchingHeightError(SearchError):
    """No lower height reproduces the modulus at the upper edge."""


class InfeasibleContourError(SearchError):
    """The contour minimum does not dominate the tail constants."""


@dataclass(frozen=True)
class Candidate:
    """A non-rigorous zero from the scan."""

    position: complex
    start_t: float
    iterations_used: int
    N_search: int = 1000

    @property
    def re(self):
        return self.position.real

    @property
    def im(self):
        return self.position.imag


@dataclass(frozen=True)
class ContourProposal:
    """Float preview of the certification contour and its constants."""

    N: int
    x0: float
    x1: float
    y0: float
    y1: float
    alpha_est: float
    a_est: float
    b_est: float
    aw_est: float
    bw_est: float
    q0_est: int
    kappa_est: float
    kappa_log10: float
    q0_continuous: float
    feasible: bool = True


class _FloatModel:
    """Float64 view of the coefficient table for kernel calls."""

    def __init__(self, table, N):
        table.require_count(N)
        cache = table.coefficients()
        self.gam = np.array([float(g.mid) for g in cache.gammas[:N]])
        self.are = np.array([float(a.re.mid) for a in cache.coeffs[:N]])
        self.aim = np.array([float(a.im.mid) for a in cache.coeffs[:N]])

    def eval(self, x, y):
        fr, fi, dr, di = _kernels.point_eval(self.gam, self.are, self.aim, x, y)
        return complex(fr, fi), complex(dr, di)


def newton_scan(
    table,
    t_min,
    t_max,
    step=0.1,
    y_start=0.04,
    max_iter=25,
    y_cap=0.085,
    N=1000,
    refine_iters=100,
):
    """Scan grid starts and return ranked, deduplicated candidates.

    The best candidate (largest imaginary part) gets ``refine_iters`` extra
    Newton iterations before the list is returned.
    """
    if not t_min < t_max:
        raise ValueError("need t_min < t_max")
    if step <= 0:
        raise ValueError("step must be positive")
    model = _FloatModel(table, N)
    starts = np.arange(t_min, t_max + step / 2, step)
    xs, ys, its, status, steps = _kernels.run_scan(
        model.gam, model.are, model.aim, starts, y_start, max_iter, y_cap
    )

    cands = []
    for i in range(len(starts)):
        if status[i] != STATUS_OK:
            continue
        if not 0.0 < ys[i] < y_cap:
            continue
        if not _residual_ok(model, xs[i], ys[i], steps[i]):
            continue
        cands.append(
            Candidate(complex(xs[i], ys[i]), float(starts[i]), int(its[i]), N)
        )

    cands = _dedupe(cands)
    cands = rank_candidates(cands)
    if cands and refine_iters > 0:
        best = _refine(model, cands[0], refine_iters, y_cap)
        if best is not None:
            cands = rank_candidates([best] + cands[1:])
    return cands


def _residual_ok(model, x, y, last_step):
    f, d = model.eval(x, y)
    return abs(f) < RESIDUAL_TOL * max(1.0, abs(d) * last_step)


def _dedupe(cands):
    """Drop repeat convergences to the same point, keeping scan order."""
    kept = []
    for c in cands:
        if all(abs(c.position - k.position) > DEDUP_TOL for k in kept):
            kept.append(c)
    return kept


def _refine(model, cand, iters, y_cap):
    x, y, it, status, _ = _kernels.run_newton(
        model.gam, model.are, model.aim, cand.re, cand.im, iters, y_cap
    )
    if status != STATUS_OK or not 0.0 < y < y_cap:
        return None
    return replace(cand, position=complex(x, y), iterations_used=cand.iterations_used + it)


def rank_candidates(cands):
    """Descending imaginary part; ties broken by ascending real part."""
    return sorted(cands, key=lambda c: (-c.im, c.re))


# ---------------------------------------------------------------------------
# contour proposal
# ---------------------------------------------------------------------------


def propose_contour(cand, table, N):
    """Derive a rectangle and constant estimates around a candidate zero.

    The vertical edges sit at ``Re z -+ 0.05``.  The top edge is the first
    local maximum of the vertical-line modulus above the candidate; the
    bottom edge is the matching height below with the same modulus, so the
    contour minimum estimate is attained on both horizontal lines.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    model = _FloatModel(table, N)
    u, v = cand.re, cand.im

    def modulus(y):
        f, _ = model.eval(u, y)
        return abs(f)

    def slope(y):
        # d/dy |F|^2 = -2 Im(conj(F) F')
        f, d = model.eval(u, y)
        return -2.0 * (f.conjugate() * d).imag

    y1 = _first_modulus_maximum(slope, v, Y1_PROBE_SPAN)
    alpha = modulus(y1)
    y0 = _matching_height_below(modulus, alpha, v)

    a_est, b_est = _coefficient_sums(table, N, y0)
    aw_est, bw_est = _coefficient_sums(table, N, v)

    gap = alpha - b_est - 2.0 * bw_est
    if gap <= 0.0:
        return ContourProposal(
            N, u - X_HALF_WIDTH, u + X_HALF_WIDTH, y0, y1, alpha,
            a_est, b_est, aw_est, bw_est, 0, 0.0, -math.inf, math.inf,
            feasible=False,
        )

    q0, q0_cont = _solve_q0_float(a_est, aw_est, gap)
    if q0 is None:
        return ContourProposal(
            N, u - X_HALF_WIDTH, u + X_HALF_WIDTH, y0, y1, alpha,
            a_est, b_est, aw_est, bw_est, 0, 0.0, -math.inf, math.inf,
            feasible=False,
        )
    log10_kappa = -N * math.log10(q0)
    return ContourProposal(
        N, u - X_HALF_WIDTH, u + X_HALF_WIDTH, y0, y1, alpha,
        a_est, b_est, aw_est, bw_est, q0, 10.0**log10_kappa, log10_kappa,
        q0_cont,
    )


def _first_modulus_maximum(slope, v, span):
    """Bracket the first sign change + -> - of the modulus slope above v."""
    lo = v + Y1_PROBE_STEP
    prev_y, prev_h = lo, slope(lo)
    y = lo + Y1_PROBE_STEP
    while y <= v + span + 1e-15:
        h = slope(y)
        if prev_h > 0.0 >= h:
            return _bisect_sign_change(slope, prev_y, y)
        prev_y, prev_h = y, h
        y += Y1_PROBE_STEP
    raise NoMaximumError(
        f"no interior modulus maximum in ({v:.6f}, {v + span:.6f}]"
    )


def _bisect_sign_change(fn, lo, hi):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < BISECT_TOL:
            return mid
        if fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _matching_height_below(modulus, alpha, v):
    """Largest y < v with modulus(y) = alpha, found by stepping then bisecting."""
    hi = v
    if modulus(hi) >= alpha:
        raise NoMatchingHeightError("modulus at the candidate already exceeds the target")
    y = v - Y1_PROBE_STEP
    while y > 0.0:
        if modulus(y) >= alpha:
            lo, hi2 = y, y + Y1_PROBE_STEP
            for _ in range(200):
                mid = 0.5 * (lo + hi2)
                if hi2 - lo < BISECT_TOL:
                    return mid
                if modulus(mid) >= alpha:
                    lo = mid
                else:
                    hi2 = mid
            return 0.5 * (lo + hi2)
        y -= Y1_PROBE_STEP
    raise NoMatchingHeightError(f"no height below {v:.6f} matches modulus {alpha:.3e}")


def _coefficient_sums(table, N, height):
    """(head, tail) sums of |a_n| e^(-g_n height) in floats.

    The tail adds every table entry beyond N plus a density estimate above
    the last one.
    """
    cache = table.coefficients()
    mods = np.array([float(m.mid) for m in cache.moduli])
    gams = np.array([float(g.mid) for g in cache.gammas])
    weights = mods * np.exp(-gams * height)
    head = float(weights[:N].sum())
    tail = float(weights[N:].sum()) + _density_tail_float(float(gams[-1]), height)
    return head, tail


def _density_tail_float(t1, y):
    """Float version of the zero-density tail bound for phi = e^(-yt)/t."""
    e1 = math.exp(-y * t1)
    main = (1.0 / (2.0 * math.pi)) * math.log(t1 / (2.0 * math.pi)) / t1 * e1 / y
    err = 4.0 * (e1 / t1) * math.log(t1) + 2.0 * e1 / (y * t1 * t1)
    return main + err


def _solve_q0_float(a, aw, gap):
    """Minimal integer q >= 2 with 2 aw sin(pi/q) + 2 pi a / q <= gap.

    The left side is strictly decreasing in q and sin(pi/q) <= pi/q, so
    q = ceil(2 pi (a + aw)/gap) is always sufficient; walk down from there.
    """

    def lhs(q):
        return 2.0 * aw * math.sin(math.pi / q) + 2.0 * math.pi * a / q

    q = max(2, math.ceil(2.0 * math.pi * (a + aw) / gap))
    if q > Q0_LIMIT:
        if lhs(Q0_LIMIT) > gap:
            return None, math.inf
        q = Q0_LIMIT
    while q > 2 and lhs(q - 1) <= gap:
        q -= 1

    # continuous crossing, for diagnostics
    if q == 2 and lhs(2.0) <= gap:
        q_cont = 2.0
    else:
        lo, hi = float(q - 1), float(q)
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if lhs(mid) <= gap:
                hi = mid
            else:
                lo = mid
        q_cont = 0.5 * (lo + hi)
    return q, q_cont


def sweep_N(cand, table, N_start=10, max_infeasible=5):
    """Increase N while the density exponent improves; keep the best proposal.

    Tolerates up to ``max_infeasible`` consecutive infeasible orders before
    giving up; stops at the first feasible order whose exponent decreases.
    """
    best = None
    infeasible_run = 0
    N = N_start
    while N <= len(table):
        try:
            prop = propose_contour(cand, table, N)
        except SearchError:
            prop = None
        if prop is None or not prop.feasible:
            infeasible_run += 1
            if best is not None or infeasible_run > max_infeasible:
                break
            N += 1
            continue
        infeasible_run = 0
        if best is None or prop.kappa_log10 > best.kappa_log10:
            best = prop
        elif prop.kappa_log10 < best.kappa_log10:
            break
        N += 1
    if best is None:
        raise InfeasibleContourError(
            f"no feasible truncation order starting from N={N_start}"
        )
    return best
