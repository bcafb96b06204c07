"""Truncated almost-periodic sum: evaluation, derivative, and tail bounds.

The object of study is the finite sum ``S_N(z) = sum_{n<=N} a_n e^(i w_n z)``
with ``a_n = 1/(1/2 + i w_n)`` and frequencies ``w_n`` the zeta-zero
ordinates.  This module evaluates ``S_N`` and its derivative over complex
balls, bounds the discarded tail ``sum_{n>N}`` rigorously (explicit terms
from the table plus a zero-density estimate beyond it), and implements the
first-term-domination test that yields a zero-free horizontal strip.

The inner loop of the evaluator is written against raw mpfr context calls:
the certification stage evaluates sums with thousands of terms at hundreds of
thousands of points, and generic ball-object arithmetic is several times
slower.  The hand-derived radius bookkeeping is covered by containment fuzz
tests against an independent high-precision oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .balls import (
    DEFAULT_PREC,
    RADIUS_PREC,
    ComplexBall,
    InconclusiveEnclosure,
    RealBall,
    _ZERO,
    _eps,
    _near,
    _rdown,
    _rup,
    ball_cabs,
    ball_exp,
    ball_log,
)


def _frac(x):
    """Exact Fraction from an mpfr value."""
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class TruncatedSum:
    """First N terms of the almost-periodic sum over a zero table.

    ``N = 0`` (empty sum) is permitted as an internal edge case.
    """

    N: int
    table: object
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")
        self.table.require_count(self.N)


def eval_FN(tsum, z):
    """Ball enclosing ``sum_{n<=N} a_n e^(i w_n z)``."""
    f, _ = _sum_terms(tsum.table, tsum.N, z, tsum.prec, want_deriv=False)
    return f


def eval_FN_deriv(tsum, z):
    """Ball enclosing the termwise derivative ``sum i w_n a_n e^(i w_n z)``."""
    _, d = _sum_terms(tsum.table, tsum.N, z, tsum.prec, want_deriv=True)
    return d


def eval_FN_pair(tsum, z):
    """(value, derivative) in one pass; used by the ball Newton step."""
    return _sum_terms(tsum.table, tsum.N, z, tsum.prec, want_deriv=True)


def eval_FN_modulus(tsum, z):
    """Ball enclosing ``|sum_{n<=N} a_n e^(i w_n z)|`` over the input box.

    Tracks one complex *disc* radius through the summation instead of
    per-component box radii: each term's enclosure is a disc around its
    midpoint, and discs stay discs under addition.  For wide inputs (contour
    pieces) this loses none of the rotation structure, so the modulus lower
    bound is roughly a factor 2 tighter than squaring the box enclosure.
    """
    return _sum_terms_disc(tsum.table, tsum.N, z, tsum.prec)


def _eval_prelude(table, N, z, prec):
    cache = table.coefficients(prec)
    ctx = _near(prec)
    rup = _rup()
    eps = _eps(prec)
    eps4 = rup.mul(mpfr(4, precision=RADIUS_PREC), eps)
    return cache.flat, ctx, rup, eps, eps4


def _sum_terms(table, N, z, prec, want_deriv):
    """Shared evaluator.  Midpoints at round-to-nearest ``prec``; every
    rounding is covered by an eps-relative term and all radius arithmetic
    rounds up, so the result balls contain the exact sums."""
    zero = mpfr(0, precision=prec)
    if N == 0:
        zb = ComplexBall(RealBall._make(zero, _ZERO, prec), RealBall._make(zero, _ZERO, prec))
        return zb, zb

    flat, ctx, rup, eps, eps4 = _eval_prelude(table, N, z, prec)
    mul = ctx.mul
    add = ctx.add
    sub = ctx.sub
    exp = ctx.exp
    sin_cos = ctx.sin_cos
    minus = ctx.minus
    umul = rup.mul
    uadd = rup.add
    uexp = rup.exp
    uexpm1 = rup.expm1
    uabs = rup.abs

    xm, xr = z.re.mid, z.re.rad
    ym, yr = z.im.mid, z.im.rad
    ax, ay = rup.abs(xm), rup.abs(ym)

    f_re = f_im = zero
    f_rr = f_ir = _ZERO
    d_re = d_im = zero
    d_rr = d_ir = _ZERO

    for gm, gr, arm, arr, aim, air in zip(
        flat.gm[:N], flat.gr[:N], flat.arm[:N], flat.arr[:N], flat.aim[:N], flat.air[:N]
    ):
        ag = uabs(gm)
        # s = w x (oscillation), t = -w y (decay), as balls
        sm = mul(gm, xm)
        sr = umul(ax, gr)
        if xr:
            sr = uadd(sr, umul(uadd(ag, gr), xr))
        sr = uadd(sr, umul(uabs(sm), eps))
        tm = minus(mul(gm, ym))
        tr = umul(ay, gr)
        if yr:
            tr = uadd(tr, umul(uadd(ag, gr), yr))
        tr = uadd(tr, umul(uabs(tm), eps))

        # E = e^(t + i s): midpoint via exp/sin_cos, one disc radius R
        em = exp(tm)
        smid, cmid = sin_cos(sm)
        erm = mul(em, cmid)
        eim = mul(em, smid)
        eu = uexp(tm)
        R = umul(eu, uadd(uexpm1(uadd(tr, sr)), eps4))

        # term = a * E (complex ball product)
        trm = sub(mul(arm, erm), mul(aim, eim))
        tim = add(mul(arm, eim), mul(aim, erm))
        aR = umul(uadd(uabs(arm), uabs(aim)), R)
        cross_r = uadd(umul(arr, uadd(uabs(erm), R)), umul(air, uadd(uabs(eim), R)))
        trr = uadd(uadd(aR, cross_r), umul(uabs(trm), eps4))
        tir = uadd(uadd(aR, cross_r), umul(uabs(tim), eps4))

        f_re = add(f_re, trm)
        f_im = add(f_im, tim)
        f_rr = uadd(f_rr, uadd(trr, umul(uabs(f_re), eps)))
        f_ir = uadd(f_ir, uadd(tir, umul(uabs(f_im), eps)))

        if want_deriv:
            # i w * term: re -> -w im, im -> w re
            drm = minus(mul(gm, tim))
            dim = mul(gm, trm)
            gterm = uadd(ag, gr)
            drr = uadd(umul(gterm, tir), umul(gr, uabs(tim)))
            dir_ = uadd(umul(gterm, trr), umul(gr, uabs(trm)))
            d_re = add(d_re, drm)
            d_im = add(d_im, dim)
            d_rr = uadd(d_rr, uadd(uadd(drr, umul(uabs(drm), eps)), umul(uabs(d_re), eps)))
            d_ir = uadd(d_ir, uadd(uadd(dir_, umul(uabs(dim), eps)), umul(uabs(d_im), eps)))

    f = ComplexBall(RealBall._make(f_re, f_rr, prec), RealBall._make(f_im, f_ir, prec))
    if not want_deriv:
        return f, None
    d = ComplexBall(RealBall._make(d_re, d_rr, prec), RealBall._make(d_im, d_ir, prec))
    return f, d


def _sum_terms_disc(table, N, z, prec):
    """Disc-tracking evaluator: returns modulus bounds of the sum over z."""
    if N == 0:
        return RealBall.from_int(0, prec)

    flat, ctx, rup, eps, eps4 = _eval_prelude(table, N, z, prec)
    mul = ctx.mul
    add = ctx.add
    sub = ctx.sub
    exp = ctx.exp
    sin_cos = ctx.sin_cos
    minus = ctx.minus
    umul = rup.mul
    uadd = rup.add
    uexp = rup.exp
    uexpm1 = rup.expm1
    uabs = rup.abs

    xm, xr = z.re.mid, z.re.rad
    ym, yr = z.im.mid, z.im.rad
    ax, ay = uabs(xm), uabs(ym)

    zero = mpfr(0, precision=prec)
    f_re = f_im = zero
    disc = _ZERO

    for gm, gr, arm, arr, aim, air, amod in zip(
        flat.gm[:N], flat.gr[:N], flat.arm[:N], flat.arr[:N],
        flat.aim[:N], flat.air[:N], flat.amod_up[:N],
    ):
        ag = uabs(gm)
        sm = mul(gm, xm)
        sr = umul(ax, gr)
        if xr:
            sr = uadd(sr, umul(uadd(ag, gr), xr))
        sr = uadd(sr, umul(uabs(sm), eps))
        tm = minus(mul(gm, ym))
        tr = umul(ay, gr)
        if yr:
            tr = uadd(tr, umul(uadd(ag, gr), yr))
        tr = uadd(tr, umul(uabs(tm), eps))

        em = exp(tm)
        smid, cmid = sin_cos(sm)
        erm = mul(em, cmid)
        eim = mul(em, smid)
        eu = uexp(tm)
        R = umul(eu, uadd(uexpm1(uadd(tr, sr)), eps4))

        trm = sub(mul(arm, erm), mul(aim, eim))
        tim = add(mul(arm, eim), mul(aim, erm))
        # |a| R for the rotation disc, coefficient box against |E| <= eu(1+..)
        term_disc = umul(amod, R)
        term_disc = uadd(term_disc, umul(uadd(arr, air), uadd(eu, R)))
        term_disc = uadd(term_disc, umul(uadd(uabs(trm), uabs(tim)), eps4))

        f_re = add(f_re, trm)
        f_im = add(f_im, tim)
        disc = uadd(disc, term_disc)
        disc = uadd(disc, umul(uadd(uabs(f_re), uabs(f_im)), eps))

    point = ComplexBall(RealBall._make(f_re, _ZERO, prec), RealBall._make(f_im, _ZERO, prec))
    base = ball_cabs(point)
    lo = _rdown().sub(base.lower(), disc)
    hi = rup.add(base.upper(), disc)
    return RealBall.from_interval(max(lo, mpfr(0, precision=RADIUS_PREC)), hi, prec)


# ---------------------------------------------------------------------------
# zero-density tail estimate
# ---------------------------------------------------------------------------

TWO_PI_E_LOWER = Fraction("17.07946")  # strictly below 2 pi e = 17.0794684...


@dataclass(frozen=True)
class PhiShape:
    """Descriptor of the supported test-function family.

    phi(t) = e^(-decay t) * t^(-inv_power) * log(t/2pi)^(-inv_log_power)
    with decay >= 0, inv_power in {0, 1, 2}, inv_log_power in {0, 1}.
    The instance must be monotone decreasing on the summation range, which
    holds whenever any of the three exponents is positive.
    """

    decay: Fraction
    inv_power: int = 0
    inv_log_power: int = 0

    def __post_init__(self):
        if self.decay < 0:
            raise ValueError("decay must be >= 0")
        if self.inv_power not in (0, 1, 2):
            raise ValueError("inv_power must be one of 0, 1, 2")
        if self.inv_log_power not in (0, 1):
            raise ValueError("inv_log_power must be 0 or 1")
        if self.decay == 0 and self.inv_power == 0 and self.inv_log_power == 0:
            raise ValueError("constant phi is not monotone decreasing")


def _as_point_ball(x, prec):
    if isinstance(x, RealBall):
        return x
    if isinstance(x, Fraction):
        return RealBall.from_fraction(x, prec)
    if isinstance(x, int):
        return RealBall.from_int(x, prec)
    return RealBall.from_decimal(str(x), prec)


def _phi_at(shape, t, prec):
    """Ball value of phi at a ball point t (t/2pi > 1 required if log used)."""
    val = ball_exp(-(_as_point_ball(Fraction(shape.decay), prec) * t))
    if shape.inv_power:
        tp = t if shape.inv_power == 1 else t * t
        val = val / tp
    if shape.inv_log_power:
        val = val / _log_t_over_2pi(t, prec)
    return val


def _log_t_over_2pi(t, prec):
    two_pi = RealBall.pi(prec) * RealBall.from_int(2, prec)
    return ball_log(t / two_pi)


def _exp_integral(y, t1, t2, prec):
    """Upper-bound ball for ``integral_{t1}^{t2} e^(-y t) dt`` (y > 0)."""
    lo = ball_exp(-(y * t1))
    if t2 is None:
        return lo / y
    hi = ball_exp(-(y * t2))
    diff = lo - hi
    # outward rounding may dip below 0 for t2 ~ t1
    return diff / y if diff.lower() > 0 else RealBall.from_interval(0, (lo / y).upper(), prec)


def _weight_integral_upper(y, power, log_power, t1, t2, prec):
    """Certified upper bound of ``integral e^(-yt) t^(-power) log(t/2pi)^(log_power) dt``
    over [t1, t2], with power >= 0 and log_power in {-1, 0, 1}.

    For a non-increasing weight the weight is frozen at t1; the one genuinely
    increasing case (power 0, log_power 1) uses the concavity bound
    ``log(t/2pi) <= log(t1/2pi) + (t - t1)/t1``.
    """
    y_pos = y.lower() > 0
    increasing_weight = power == 0 and log_power == 1

    def weight_at(t):
        w = RealBall.from_int(1, prec)
        if power == 1:
            w = w / t
        elif power == 2:
            w = w / (t * t)
        if log_power == 1:
            w = w * _log_t_over_2pi(t, prec)
        elif log_power == -1:
            w = w / _log_t_over_2pi(t, prec)
        return w

    if not y_pos:
        if t2 is None:
            raise InconclusiveEnclosure("zero decay needs a finite upper limit")
        width = t2 - t1
        ref = t2 if increasing_weight else t1
        return weight_at(ref) * width

    if not increasing_weight:
        return weight_at(t1) * _exp_integral(y, t1, t2, prec)

    if t2 is not None:
        return weight_at(t2) * _exp_integral(y, t1, t2, prec)

    # integral_{t1}^inf e^(-yt) (log(t1/2pi) + (t-t1)/t1) dt
    e1 = ball_exp(-(y * t1))
    first = _log_t_over_2pi(t1, prec) * e1 / y
    second = e1 / (t1 * y * y)
    return first + second


def lehman_bound(shape, t1, t2=None, prec=DEFAULT_PREC):
    """Upper bound for ``sum_{t1 <= w_n <= t2} phi(w_n)`` over zero ordinates.

    Main term ``(1/2pi) integral phi(t) log(t/2pi) dt`` plus the error
    majorant ``4 phi(t1) log(t1) + 2 integral phi(t)/t dt``, every integral
    replaced by a certified upper bound.  Returns a ball containing the sum
    in ``[0, bound]``; only the upper endpoint is meaningful.
    """
    t1 = _as_point_ball(t1, prec)
    t2 = None if t2 is None else _as_point_ball(t2, prec)
    if not _frac(t1.lower()) >= TWO_PI_E_LOWER:
        raise InconclusiveEnclosure(f"lower limit {t1!r} must be >= 2 pi e")
    if t2 is not None and not t2.lower() > t1.upper():
        raise ValueError("upper limit must exceed lower limit")

    y = _as_point_ball(Fraction(shape.decay), prec)
    p, q = shape.inv_power, shape.inv_log_power

    two_pi = RealBall.pi(prec) * RealBall.from_int(2, prec)
    main = _weight_integral_upper(y, p, 1 - q, t1, t2, prec) / two_pi
    err = RealBall.from_int(4, prec) * _phi_at(shape, t1, prec) * ball_log(t1)
    err = err + RealBall.from_int(2, prec) * _weight_integral_upper(
        y, p + 1, -q, t1, t2, prec
    )
    total = main + err
    return RealBall.from_interval(0, total.upper(), prec)


# ---------------------------------------------------------------------------
# tail bounds for the full sum minus its truncation
# ---------------------------------------------------------------------------


def tail_bound_rh(table, N, y, prec=DEFAULT_PREC):
    """Upper bound on ``sum_{n>N} e^(-w_n y)/w_n`` (all frequencies real).

    Explicit ball sum over the table entries beyond N, plus the zero-density
    estimate above the last tabulated ordinate.
    """
    table.require_count(N)
    y = _as_point_ball(y, prec)
    if not y.lower() > 0:
        raise InconclusiveEnclosure(f"tail bound needs positive height, got {y!r}")
    total = _explicit_tail(table, N, len(table), y, prec)
    last = table.ordinate(len(table))
    shape = PhiShape(decay=_frac(y.lower()), inv_power=1)
    total = total + lehman_bound(shape, last, None, prec)
    return RealBall.from_interval(0, total.upper(), prec)


def tail_bound_partial_rh(table, N, x, y, T=None, prec=DEFAULT_PREC):
    """Tail bound assuming the critical-line hypothesis only below height T.

    Above T the zeros may be off the half-line; their terms are majorized by
    ``e^(x/2) e^(-w y)/w``, bounded with the same zero-density estimate.
    ``T = None`` means unconditional trust (reduces to :func:`tail_bound_rh`).
    """
    if T is None:
        T = table.rh_verified_height
    table.require_count(N)
    y = _as_point_ball(y, prec)
    if not y.lower() > 0:
        raise InconclusiveEnclosure(f"tail bound needs positive height, got {y!r}")
    shape = PhiShape(decay=_frac(y.lower()), inv_power=1)

    total = _explicit_tail(table, N, len(table), y, prec)
    last = table.ordinate(len(table))
    unconditional = isinstance(T, float) and math.isinf(T)
    if unconditional:
        total = total + lehman_bound(shape, last, None, prec)
        return RealBall.from_interval(0, total.upper(), prec)

    T = Fraction(T)
    if not T >= _frac(last.upper()):
        raise ValueError(f"trust height {T} lies below the last tabulated ordinate")
    Tball = _as_point_ball(T, prec)
    total = total + lehman_bound(shape, last, Tball, prec)
    x = _as_point_ball(x, prec)
    half_x = x / RealBall.from_int(2, prec)
    above = lehman_bound(shape, Tball, None, prec)
    total = total + ball_exp(half_x) * above
    return RealBall.from_interval(0, total.upper(), prec)


def _explicit_tail(table, n_from, n_to, y, prec):
    """Ball sum of ``e^(-w_n y)/w_n`` for n in (n_from, n_to]."""
    cache = table.coefficients(prec)
    total = RealBall.from_int(0, prec)
    for g in cache.gammas[n_from:n_to]:
        total = total + ball_exp(-(g * y)) / g
    return total


# ---------------------------------------------------------------------------
# zero-free strip
# ---------------------------------------------------------------------------


class ZeroFreeVerdict(Enum):
    ZERO_FREE = "zero_free"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ZeroFreeResult:
    verdict: ZeroFreeVerdict
    first_term: RealBall
    explicit_rest: RealBall
    density_tail: RealBall

    @property
    def rest(self):
        return self.explicit_rest + self.density_tail


def zero_free_check(table, y0, K=1000, prec=DEFAULT_PREC):
    """First-term-domination test for a zero-free strip above height y0.

    Returns ZERO_FREE when the first term's modulus strictly dominates the
    upper bound for every other term at height y0; the domination margin only
    grows with the height, so the verdict covers the whole strip above.
    """
    table.require_count(K)
    y0 = _as_point_ball(y0, prec)
    if not y0.lower() > 0:
        raise InconclusiveEnclosure("strip height must be positive")

    cache = table.coefficients(prec)
    first = cache.moduli[0] * ball_exp(-(cache.gammas[0] * y0))

    explicit = RealBall.from_int(0, prec)
    for g, m in zip(cache.gammas[1:K], cache.moduli[1:K]):
        explicit = explicit + m * ball_exp(-(g * y0))

    shape = PhiShape(decay=_frac(y0.lower()), inv_power=1)
    tail = lehman_bound(shape, table.ordinate(K), None, prec)

    rest_upper = (explicit + tail).upper()
    verdict = (
        ZeroFreeVerdict.ZERO_FREE
        if first.lower() > rest_upper
        else ZeroFreeVerdict.INCONCLUSIVE
    )
    return ZeroFreeResult(verdict, first, explicit, tail)
