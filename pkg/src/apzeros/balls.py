"""Midpoint-radius (ball) arithmetic on MPFR with outward rounding.

Every value is a ball ``[mid - rad, mid + rad]``; every operation returns a
ball that provably contains the exact image of its input sets.  Midpoints are
computed with round-to-nearest at the ball's working precision, radii with a
64-bit round-up context, so the containment guarantee survives all rounding.

Comparisons between balls are three-valued: an order verdict is produced only
when the balls are disjoint, otherwise ``INCONCLUSIVE``.  Callers that need a
verdict wrap their computation in :func:`run_with_ladder`, which retries at
doubled precision up to a hard cap.

Only the functions the certification pipeline needs are provided: field
arithmetic, ``exp``, ``sin``/``cos``, ``log``, ``sqrt``, ``atan`` and complex
modulus.  All values are immutable; operations are pure.
"""

from __future__ import annotations

import threading
from enum import Enum
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq

DEFAULT_PREC = 384
MAX_PREC = 8192
RADIUS_PREC = 64

_EMIN = gmpy2.get_emin_min()
_EMAX = gmpy2.get_emax_max()


class InconclusiveEnclosure(ArithmeticError):
    """The enclosure is too wide to support the requested conclusion."""


class PrecisionExhausted(ArithmeticError):
    """Doubling precision up to the cap never produced a conclusive result."""


class Comparison(Enum):
    LESS = -1
    INCONCLUSIVE = 0
    GREATER = 1


_local = threading.local()


def _ctx_cache():
    cache = getattr(_local, "ctx", None)
    if cache is None:
        cache = _local.ctx = {}
    return cache


def _ctx(prec, rounding):
    """Thread-local gmpy2 context with the widest exponent range."""
    cache = _ctx_cache()
    key = (prec, rounding)
    ctx = cache.get(key)
    if ctx is None:
        ctx = cache[key] = gmpy2.context(
            precision=prec, round=rounding, emin=_EMIN, emax=_EMAX
        )
    return ctx


def _near(prec):
    return _ctx(prec, gmpy2.RoundToNearest)


def _rup():
    return _ctx(RADIUS_PREC, gmpy2.RoundUp)


def _rdown():
    return _ctx(RADIUS_PREC, gmpy2.RoundDown)


def _down_full(prec):
    return _ctx(prec, gmpy2.RoundDown)


def _up_full(prec):
    return _ctx(prec, gmpy2.RoundUp)


_EPS = {}


def _eps(prec):
    # relative round-to-nearest error bound: |fl(x) - x| <= 2^-prec |fl(x)|
    e = _EPS.get(prec)
    if e is None:
        e = _EPS[prec] = gmpy2.exp2(mpfr(-prec, precision=64))
    return e


_ZERO = mpfr(0, precision=RADIUS_PREC)

# Values whose exponent falls below MPFR's representable range are widened to
# [0, _TINY].  2^(-2^28) is far below every threshold the pipeline compares
# against, yet far enough from the exponent floor that later products cannot
# underflow again.
_TINY = gmpy2.exp2(mpfr(-(1 << 28), precision=RADIUS_PREC))


def _round_term(ctx, mid, prec):
    """Radius contribution of the midpoint rounding, or 0 if it was exact."""
    if ctx.underflow:
        return _rup().add(_TINY, _rup().mul(_rup().abs(mid), _eps(prec)))
    if ctx.inexact:
        return _rup().mul(_rup().abs(mid), _eps(prec))
    return _ZERO


class RealBall:
    """An interval ``[mid - rad, mid + rad]`` at a working precision in bits."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=_ZERO, prec=DEFAULT_PREC):
        mid = mpfr(mid, precision=prec) if not isinstance(mid, mpfr) else mid
        rad = mpfr(rad, precision=RADIUS_PREC) if not isinstance(rad, mpfr) else rad
        if not gmpy2.is_finite(mid) or not gmpy2.is_finite(rad) or rad < 0:
            raise PrecisionExhausted(f"non-finite ball [{mid} +/- {rad}]")
        self.mid = mid
        self.rad = rad
        self.prec = prec

    @classmethod
    def _make(cls, mid, rad, prec):
        b = object.__new__(cls)
        if not gmpy2.is_finite(mid) or not gmpy2.is_finite(rad):
            raise PrecisionExhausted(f"non-finite ball [{mid} +/- {rad}]")
        b.mid = mid
        b.rad = rad
        b.prec = prec
        return b

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, n, prec=DEFAULT_PREC):
        ctx = _near(prec)
        ctx.clear_flags()
        m = ctx.add(mpfr(0, precision=prec), n)
        return cls._make(m, _round_term(ctx, m, prec), prec)

    @classmethod
    def from_fraction(cls, q, prec=DEFAULT_PREC):
        """Exact rational -> ball of radius <= one rounding of the quotient."""
        q = mpq(q.numerator, q.denominator)
        ctx = _near(prec)
        ctx.clear_flags()
        m = ctx.add(mpfr(0, precision=prec), q)
        return cls._make(m, _round_term(ctx, m, prec), prec)

    @classmethod
    def from_float(cls, x, prec=DEFAULT_PREC):
        if prec < 53:
            raise ValueError("float ingestion needs prec >= 53")
        return cls._make(mpfr(x, precision=prec), _ZERO, prec)

    @classmethod
    def from_decimal(cls, s, prec=DEFAULT_PREC, extra_rad=0):
        """Ball around a decimal literal, optionally widened by ``extra_rad``.

        ``extra_rad`` may be an int, float, Fraction or decimal string; it is
        converted with upward rounding so the declared widening is honoured.
        """
        ctx = _near(prec)
        ctx.clear_flags()
        m = ctx.add(mpfr(0, precision=prec), mpfr(s, precision=prec + 8))
        r = _round_term(ctx, m, prec)
        # the nested mpfr() conversion rounds too; cover it with one more eps
        r = _rup().add(r, _rup().mul(_rup().abs(m), _eps(prec)))
        if extra_rad:
            if isinstance(extra_rad, Fraction):
                extra = _rup().add(_ZERO, mpq(extra_rad.numerator, extra_rad.denominator))
            else:
                extra = _rup().add(_ZERO, mpfr(str(extra_rad), precision=RADIUS_PREC + 8))
            r = _rup().add(r, extra)
        return cls._make(m, r, prec)

    @classmethod
    def from_interval(cls, lo, hi, prec=DEFAULT_PREC):
        lo = _down_full(prec + 8).add(mpfr(0, precision=prec + 8), lo)
        hi = _up_full(prec + 8).add(mpfr(0, precision=prec + 8), hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        ctx = _near(prec)
        m = ctx.div(ctx.add(lo, hi), 2)
        rup = _rup()
        r = max(rup.sub(hi, m), rup.sub(m, lo))
        return cls._make(m, max(r, _ZERO), prec)

    @classmethod
    def pi(cls, prec=DEFAULT_PREC):
        m = _near(prec).const_pi()
        return cls._make(m, _rup().mul(_rup().abs(m), _eps(prec)), prec)

    # -- accessors ---------------------------------------------------------

    def lower(self):
        """Directed lower endpoint (valid lower bound of the ball's set)."""
        return _down_full(self.prec).sub(self.mid, self.rad)

    def upper(self):
        return _up_full(self.prec).add(self.mid, self.rad)

    def is_exact(self):
        return self.rad == 0

    def contains(self, value):
        """Exact containment test; ``value`` may be int, Fraction, mpq, mpfr."""
        if isinstance(value, float):
            value = Fraction(value)
        if isinstance(value, Fraction):
            value = mpq(value.numerator, value.denominator)
        m, r = mpq(self.mid), mpq(self.rad)
        return m - r <= value <= m + r

    def contains_ball(self, other):
        m, r = mpq(self.mid), mpq(self.rad)
        om, orad = mpq(other.mid), mpq(other.rad)
        return m - r <= om - orad and om + orad <= m + r

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"[{self.mid!s} +/- {self.rad!s}]"

    def __eq__(self, other):
        return (
            isinstance(other, RealBall)
            and self.mid == other.mid
            and self.rad == other.rad
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.mid, self.rad, self.prec))

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return RealBall._make(_near(self.prec).minus(self.mid), self.rad, self.prec)

    def __add__(self, other):
        return ball_add(self, other)

    def __sub__(self, other):
        return ball_sub(self, other)

    def __mul__(self, other):
        return ball_mul(self, other)

    def __truediv__(self, other):
        return ball_div(self, other)

    def abs(self):
        """Ball enclosing ``{|x| : x in self}``."""
        lo = self.lower()
        hi = self.upper()
        if lo >= 0:
            return self
        if hi <= 0:
            return -self
        return RealBall.from_interval(0, max(_rup().minus(lo), hi), self.prec)

    # -- serialization -----------------------------------------------------

    def to_decimal_parts(self):
        """(mid, rad) as decimal strings that round-trip bit-exactly."""
        return _mpfr_to_decimal(self.mid), _mpfr_to_decimal(self.rad)

    @classmethod
    def from_decimal_parts(cls, mid_str, rad_str, prec):
        m = mpfr(mid_str, precision=prec)
        r = mpfr(rad_str, precision=RADIUS_PREC)
        return cls._make(m, r, prec)


def _mpfr_to_decimal(x):
    if x == 0:
        return "0"
    digits, exp, _ = x.digits(10, 0)
    sign = ""
    if digits.startswith("-"):
        sign, digits = "-", digits[1:]
    return f"{sign}0.{digits}e{exp}"


def _binop_prec(x, y):
    return max(x.prec, y.prec)


def ball_add(x, y):
    prec = _binop_prec(x, y)
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.add(x.mid, y.mid)
    rup = _rup()
    r = rup.add(x.rad, y.rad)
    r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_sub(x, y):
    prec = _binop_prec(x, y)
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.sub(x.mid, y.mid)
    rup = _rup()
    r = rup.add(x.rad, y.rad)
    r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_mul(x, y):
    prec = _binop_prec(x, y)
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.mul(x.mid, y.mid)
    rup = _rup()
    # |x y - mx my| <= |mx| ry + |my| rx + rx ry
    r = rup.mul(rup.abs(x.mid), y.rad)
    r = rup.add(r, rup.mul(rup.abs(y.mid), x.rad))
    r = rup.add(r, rup.mul(x.rad, y.rad))
    r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_div(x, y):
    """Quotient ball; the divisor ball must exclude zero."""
    prec = _binop_prec(x, y)
    ylow = _rdown().sub(_rdown().abs(y.mid), y.rad)
    if not ylow > 0:
        raise InconclusiveEnclosure(f"division by ball containing 0: {y!r}")
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.div(x.mid, y.mid)
    rup = _rup()
    # |x/y - mx/my| <= (rx |my| + |mx| ry) / (|my| (|my| - ry))
    num = rup.add(rup.mul(x.rad, rup.abs(y.mid)), rup.mul(rup.abs(x.mid), y.rad))
    den = _rdown().mul(_rdown().abs(y.mid), ylow)
    r = rup.div(num, den)
    r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_exp(x):
    prec = x.prec
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.exp(x.mid)
    if ctx.underflow:
        # true value is positive but below the exponent floor
        return RealBall.from_interval(0, _TINY, prec)
    rup = _rup()
    if x.rad == 0:
        r = _round_term(ctx, m, prec)
    else:
        # sup deviation e^mx (e^rx - 1)
        r = rup.mul(rup.exp(x.mid), rup.expm1(x.rad))
        r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_sin(x):
    prec = x.prec
    if x.rad >= 4:
        return RealBall.from_interval(-1, 1, prec)
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.sin(x.mid)
    r = _rup().add(x.rad, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_cos(x):
    prec = x.prec
    if x.rad >= 4:
        return RealBall.from_interval(-1, 1, prec)
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.cos(x.mid)
    r = _rup().add(x.rad, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_log(x):
    prec = x.prec
    xlow = _down_full(prec).sub(x.mid, x.rad)
    if not xlow > 0:
        raise InconclusiveEnclosure(f"log of ball touching 0: {x!r}")
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.log(x.mid)
    rup = _rup()
    r = rup.div(x.rad, xlow) if x.rad != 0 else _ZERO
    r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_sqrt(x):
    prec = x.prec
    xlow = _down_full(prec).sub(x.mid, x.rad)
    if xlow < 0:
        raise InconclusiveEnclosure(f"sqrt of ball touching negatives: {x!r}")
    if x.rad == 0:
        ctx = _near(prec)
        ctx.clear_flags()
        m = ctx.sqrt(x.mid)
        return RealBall._make(m, _round_term(ctx, m, prec), prec)
    lo = _down_full(prec).sqrt(xlow)
    hi = _up_full(prec).sqrt(_up_full(prec).add(x.mid, x.rad))
    return RealBall.from_interval(lo, hi, prec)


def ball_atan(x):
    prec = x.prec
    ctx = _near(prec)
    ctx.clear_flags()
    m = ctx.atan(x.mid)
    rup = _rup()
    if x.rad == 0:
        r = _round_term(ctx, m, prec)
    else:
        # derivative 1/(1+t^2) maximized at the point of least magnitude
        tlow = _rdown().sub(_rdown().abs(x.mid), x.rad)
        if tlow > 0:
            den = _rdown().add(1, _rdown().mul(tlow, tlow))
            r = rup.div(x.rad, den)
        else:
            r = mpfr(x.rad, precision=RADIUS_PREC)
        r = rup.add(r, _round_term(ctx, m, prec))
    return RealBall._make(m, r, prec)


def ball_compare(x, y):
    """Three-valued order test; a verdict only when the balls are disjoint."""
    if _up_full(max(x.prec, y.prec)).add(x.mid, x.rad) < _down_full(
        max(x.prec, y.prec)
    ).sub(y.mid, y.rad):
        return Comparison.LESS
    if _down_full(max(x.prec, y.prec)).sub(x.mid, x.rad) > _up_full(
        max(x.prec, y.prec)
    ).add(y.mid, y.rad):
        return Comparison.GREATER
    return Comparison.INCONCLUSIVE


class ComplexBall:
    """Componentwise complex enclosure (a rectangle in the plane)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        if not isinstance(re, RealBall) or not isinstance(im, RealBall):
            raise TypeError("ComplexBall components must be RealBall")
        self.re = re
        self.im = im

    @classmethod
    def from_complex(cls, z, prec=DEFAULT_PREC):
        return cls(RealBall.from_float(z.real, prec), RealBall.from_float(z.imag, prec))

    @classmethod
    def exact(cls, re, im, prec=DEFAULT_PREC):
        return cls(RealBall(re, 0, prec), RealBall(im, 0, prec))

    @property
    def prec(self):
        return max(self.re.prec, self.im.prec)

    def conj(self):
        return ComplexBall(self.re, -self.im)

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __add__(self, other):
        return ComplexBall(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return ComplexBall(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return ComplexBall(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        if isinstance(other, RealBall):
            return ComplexBall(self.re / other, self.im / other)
        den = other.re * other.re + other.im * other.im
        num = self * other.conj()
        return ComplexBall(num.re / den, num.im / den)

    def __eq__(self, other):
        return (
            isinstance(other, ComplexBall)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.re, self.im))

    def contains(self, re_value, im_value):
        return self.re.contains(re_value) and self.im.contains(im_value)

    def __complex__(self):
        return complex(float(self.re.mid), float(self.im.mid))

    def __repr__(self):
        return f"({self.re!r} + {self.im!r}i)"


def ball_cexp(z):
    """Enclosure of ``{e^w : w in z}`` for a complex ball ``z``.

    The midpoint is ``e^x (cos y + i sin y)``; every point of the input box is
    within ``|dz| <= rad(x) + rad(y)`` of the midpoint, so the image lies in a
    disc of radius ``e^x (e^|dz| - 1)`` around it (plus midpoint rounding).
    """
    prec = z.prec
    ctx = _near(prec)
    ctx.clear_flags()
    e = ctx.exp(z.re.mid)
    if ctx.underflow:
        tiny = RealBall.from_interval(-_TINY, _TINY, prec)
        return ComplexBall(tiny, tiny)
    s, c = ctx.sin_cos(z.im.mid)
    rem = ctx.mul(e, c)
    imm = ctx.mul(e, s)
    rup = _rup()
    eup = rup.exp(z.re.mid)
    dz = rup.add(z.re.rad, z.im.rad)
    r = rup.mul(eup, rup.expm1(dz)) if dz != 0 else _ZERO
    if ctx.inexact:
        r = rup.add(r, rup.mul(eup, rup.mul(mpfr(4, precision=RADIUS_PREC), _eps(prec))))
    if ctx.underflow:
        r = rup.add(r, _TINY)
    rb = RealBall._make(rem, r, prec)
    ib = RealBall._make(imm, r, prec)
    return ComplexBall(rb, ib)


def ball_cabs(z):
    """Enclosure of the modulus of a complex ball.

    Lower bounds are clamped at zero: the enclosure stays valid when the box
    comes close to (or contains) the origin.
    """
    prec = z.prec
    ctx = _near(prec)
    ctx.clear_flags()
    t = ctx.add(ctx.mul(z.re.mid, z.re.mid), ctx.mul(z.im.mid, z.im.mid))
    m = ctx.sqrt(t)
    rup = _rup()
    # max displacement within the box is the diagonal half-length
    r = rup.sqrt(rup.add(rup.mul(z.re.rad, z.re.rad), rup.mul(z.im.rad, z.im.rad)))
    if ctx.inexact:
        r = rup.add(r, rup.mul(rup.abs(m), rup.mul(mpfr(4, precision=RADIUS_PREC), _eps(prec))))
    if ctx.underflow:
        r = rup.add(r, _TINY)
    lo = _down_full(prec).sub(m, r)
    if lo < 0:
        return RealBall.from_interval(0, _up_full(prec).add(m, r), prec)
    return RealBall._make(m, r, prec)


def ball_cabs_lower(z):
    """Certified lower bound of ``|w|`` over the ball, clamped at 0."""
    lo = ball_cabs(z).lower()
    return lo if lo > 0 else mpfr(0, precision=RADIUS_PREC)


def run_with_ladder(fn, start_prec=DEFAULT_PREC, max_prec=MAX_PREC):
    """Run ``fn(prec)``, doubling precision on InconclusiveEnclosure.

    Raises :class:`PrecisionExhausted` once the cap is reached.
    """
    prec = start_prec
    while True:
        try:
            return fn(prec)
        except InconclusiveEnclosure as exc:
            if prec >= max_prec:
                raise PrecisionExhausted(
                    f"inconclusive at maximum precision {max_prec}: {exc}"
                ) from exc
            prec = min(2 * prec, max_prec)
