"""Rigorous certification pipeline.

Confirms a genuine zero of the full almost-periodic sum near a scan
candidate (ball Newton step, then the argument principle on a small circle
with a tail bound closing the gap to the truncation), lower-bounds the
minimum modulus of the order-N sum over a rectangular contour by exhaustive
piece evaluation, computes the four coefficient-sum constants, and solves
for the minimal Dirichlet modulus q0 admitted by the contour inequality.

Every comparison is a ball comparison; anything inconclusive raises
:class:`~apzeros.balls.InconclusiveEnclosure`, which the entry points retry
at doubled precision (and, for the circle, doubled subdivision) before
giving up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .balls import (
    DEFAULT_PREC,
    MAX_PREC,
    Comparison,
    ComplexBall,
    InconclusiveEnclosure,
    RealBall,
    ball_atan,
    ball_cabs,
    ball_compare,
    ball_cos,
    ball_exp,
    ball_sin,
)
from .fsum import (
    PhiShape,
    TruncatedSum,
    _frac,
    eval_FN,
    eval_FN_modulus,
    eval_FN_pair,
    lehman_bound,
    tail_bound_partial_rh,
)
from .search import Candidate


class _NeedsSubdivision(InconclusiveEnclosure):
    """Finer circle subdivision (not higher precision) should resolve this."""

DEFAULT_RADIUS = Fraction(1, 2**20)
DEFAULT_SEG_LEN = Fraction(1, 10**6)
SEGMENTS_START = 2**12
SEGMENTS_MAX = 2**20
HEAD_ORDER = 512
Q0_LIMIT = 10**6


class RigorError(RuntimeError):
    pass


class RefinementError(RigorError):
    pass


class RoucheError(RigorError):
    pass


class ContourError(RigorError):
    pass


class QSolveError(RigorError):
    pass


class LegacyCriterionError(RigorError):
    """The coarser contour criterion has no feasible modulus."""


@dataclass(frozen=True)
class VerifiedZero:
    """A certified zero of the full sum inside a disc.

    ``xi`` is the box enclosure of the disc around the refined center;
    ``min_on_circle`` strictly exceeding ``tail_at_circle`` transfers the
    winding-1 conclusion from the order-M truncation to the full sum.
    """

    xi: ComplexBall
    center: ComplexBall
    radius_used: Fraction
    min_on_circle: RealBall
    tail_at_circle: RealBall
    M: int
    winding: int
    segments: int

    @property
    def w_lower(self):
        """Certified lower bound on the zero's imaginary part."""
        return self.xi.im.lower()


@dataclass(frozen=True)
class ContourBounds:
    """Rectangle, truncation order and the five contour constants.

    ``alpha`` bounds the minimum modulus of the order-N sum on the contour;
    ``a``/``b`` are head and tail coefficient sums at the contour bottom,
    ``a_w``/``b_w`` the same at the certified height of the zero.
    """

    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction
    N: int
    alpha: RealBall
    a: RealBall
    b: RealBall
    a_w: RealBall
    b_w: RealBall
    w_lower: RealBall

    def __post_init__(self):
        if not self.x1 - self.x0 < 1:
            raise ContourError(f"contour width {self.x1 - self.x0} must be < 1")
        if ball_compare(self.alpha, self.b + (self.b_w + self.b_w)) is not Comparison.GREATER:
            raise InconclusiveEnclosure(
                "contour minimum does not dominate the tail constants"
            )


# ---------------------------------------------------------------------------
# zero confirmation
# ---------------------------------------------------------------------------


def refine_candidate(cand, table, M=4520, prec=DEFAULT_PREC):
    """One ball Newton step on the order-M sum from a scan candidate."""
    _require_certify_grade(table)
    table.require_count(M)
    z = cand.position if isinstance(cand, Candidate) else cand
    z0 = z if isinstance(z, ComplexBall) else ComplexBall.from_complex(complex(z), prec)
    tsum = TruncatedSum(M, table, prec)
    f, d = eval_FN_pair(tsum, z0)
    try:
        step = f / d
    except InconclusiveEnclosure as exc:
        raise RefinementError(f"derivative enclosure contains zero: {exc}") from exc
    return z0 - step


def deriv_bound_above(table, M, y_low, prec=DEFAULT_PREC):
    """Ball bound for ``sup |F_M'|`` over the half-plane Im z >= y_low."""
    cache = table.coefficients(prec)
    y = y_low if isinstance(y_low, RealBall) else RealBall.from_fraction(Fraction(y_low), prec)
    total = RealBall.from_int(0, prec)
    for g, m in zip(cache.gammas[:M], cache.moduli[:M]):
        total = total + g * m * ball_exp(-(g * y))
    return total


def _arg_ball(u, prec):
    """Principal argument of a complex ball that excludes the origin and
    does not straddle the negative real axis."""
    pi = RealBall.pi(prec)
    re, im = u.re, u.im
    if re.lower() > 0:
        return ball_atan(im / re)
    if im.lower() > 0:
        return pi * RealBall.from_fraction(Fraction(1, 2), prec) - ball_atan(re / im)
    if im.upper() < 0:
        return -(pi * RealBall.from_fraction(Fraction(1, 2), prec)) - ball_atan(re / im)
    raise InconclusiveEnclosure(f"argument of {u!r} straddles the branch cut")


def circle_winding_and_min(eval_point, center, radius, segments, variation, prec):
    """Winding number and modulus minimum over a circle from point values.

    ``eval_point(ComplexBall) -> ComplexBall`` must return enclosures of the
    analytic function; ``variation`` is a ball bounding |f(z) - f(z')| for
    z, z' on a common arc of the subdivision.  Each arc's image then lies in
    a disc around its endpoint value; requiring those discs to exclude the
    origin pins the per-arc argument change to its principal value.
    """
    two_pi = RealBall.pi(prec) * RealBall.from_int(2, prec)
    rad_ball = RealBall.from_fraction(radius, prec)
    var_up = variation.upper()

    values = []
    min_lower = None
    min_upper = None
    for j in range(segments):
        theta = two_pi * RealBall.from_fraction(Fraction(j, segments), prec)
        point = ComplexBall(
            center.re + rad_ball * ball_cos(theta),
            center.im + rad_ball * ball_sin(theta),
        )
        v = eval_point(point)
        m = ball_cabs(v)
        lo, up = m.lower(), m.upper()
        if min_lower is None or lo < min_lower:
            min_lower = lo
        if min_upper is None or up < min_upper:
            min_upper = up
        if not lo > var_up:
            raise _NeedsSubdivision(
                f"arc {j}: image disc may touch the origin "
                f"(|f| >= {float(lo):.3e}, variation {float(var_up):.3e})"
            )
        values.append(v)

    total = RealBall.from_int(0, prec)
    for j in range(segments):
        u = values[(j + 1) % segments] * values[j].conj()
        total = total + _arg_ball(u, prec)

    winding = int(round(float(total.mid) / (2 * 3.141592653589793)))
    residue = (total - two_pi * RealBall.from_int(winding, prec)).abs()
    if ball_compare(residue, RealBall.pi(prec)) is not Comparison.LESS:
        raise _NeedsSubdivision("total argument variation is ambiguous")

    # the circle minimum sits within half an arc of some sample
    half_var = variation * RealBall.from_fraction(Fraction(1, 2), prec)
    lo = (RealBall.from_interval(min_lower, min_lower, prec) - half_var).lower()
    min_ball = RealBall.from_interval(max(lo, 0), min_upper, prec)
    return winding, min_ball


def _circle_eval_factory(table, M, head, center, radius, prec):
    """Point evaluator for the order-M sum on the circle.

    Evaluates the first ``head`` terms per point and encloses the remaining
    (head, M] block once, uniformly over the disc, by its absolute column
    sums at the lowest height of the circle.  Falls back to full termwise
    evaluation when ``head >= M``.
    """
    tsum = TruncatedSum(min(head, M), table, prec)
    if head >= M:
        return lambda z: eval_FN(tsum, z)

    y_low = (
        center.im - RealBall.from_fraction(radius, prec)
    ).lower()
    cache = table.coefficients(prec)
    rest = RealBall.from_int(0, prec)
    ylow_ball = RealBall._make(y_low, gmpy2.mpfr(0, precision=64), prec)
    for g, m in zip(cache.gammas[head:M], cache.moduli[head:M]):
        rest = rest + m * ball_exp(-(g * ylow_ball))
    block = RealBall.from_interval(-(rest.upper()), rest.upper(), prec)
    rest_box = ComplexBall(block, block)

    def eval_point(z):
        return eval_FN(tsum, z) + rest_box

    return eval_point


def rouche_verify(
    cand,
    table,
    radius=DEFAULT_RADIUS,
    M=4520,
    prec=DEFAULT_PREC,
    segments=SEGMENTS_START,
    head_order=HEAD_ORDER,
):
    """Certify a zero of the full sum within ``radius`` of the refined candidate.

    Pipeline: one ball Newton step; winding number and modulus minimum of the
    order-M sum on the circle (doubling subdivision and precision while
    inconclusive); tail bound for the full sum on the circle; the strict gap
    plus winding 1 certify the enclosure.
    """
    _require_certify_grade(table)
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")

    def attempt(p, segs, head):
        center = refine_candidate(cand, table, M, p)
        rad_ball = RealBall.from_fraction(radius, p)
        y_low_ball = center.im - rad_ball
        if not y_low_ball.lower() > 0:
            raise RoucheError("circle dips below the real axis")

        deriv = deriv_bound_above(table, M, RealBall._make(y_low_ball.lower(), gmpy2.mpfr(0, precision=64), p), p)
        two_pi = RealBall.pi(p) * RealBall.from_int(2, p)
        arc_len = two_pi * rad_ball / RealBall.from_int(segs, p)
        variation = deriv * arc_len

        eval_point = _circle_eval_factory(table, M, head, center, radius, p)
        winding, min_ball = circle_winding_and_min(
            eval_point, center, radius, segs, variation, p
        )

        x_up = center.re + rad_ball
        tail = tail_bound_partial_rh(table, M, x_up, y_low_ball, table.rh_verified_height, p)

        if ball_compare(min_ball, tail) is not Comparison.GREATER:
            raise InconclusiveEnclosure(
                f"no strict gap: min {float(min_ball.lower()):.3e} "
                f"vs tail {float(tail.upper()):.3e}"
            )
        if winding != 1:
            raise RoucheError(
                f"winding number is {winding}, expected 1; "
                "the candidate does not isolate a simple zero"
            )

        xi = ComplexBall(
            RealBall.from_interval(
                (center.re - rad_ball).lower(), (center.re + rad_ball).upper(), p
            ),
            RealBall.from_interval(
                (center.im - rad_ball).lower(), (center.im + rad_ball).upper(), p
            ),
        )
        return VerifiedZero(
            xi, center, radius, min_ball, tail, M, winding, segs
        )

    p, segs, head = prec, segments, head_order
    while True:
        try:
            return attempt(p, segs, head)
        except _NeedsSubdivision as exc:
            if segs < SEGMENTS_MAX:
                segs *= 2
            elif p < MAX_PREC:
                p = min(2 * p, MAX_PREC)
            else:
                raise RoucheError(f"inconclusive at maximal effort: {exc}") from exc
        except InconclusiveEnclosure as exc:
            if head < M:
                head = M
            elif p < MAX_PREC:
                p = min(2 * p, MAX_PREC)
            else:
                raise RoucheError(f"inconclusive at maximal effort: {exc}") from exc


def winding_number(M, table, center, radius, segments=SEGMENTS_START, prec=DEFAULT_PREC):
    """Winding number of the order-M sum around a circle (argument principle)."""
    center = center if isinstance(center, ComplexBall) else ComplexBall.from_complex(complex(center), prec)
    radius = Fraction(radius)
    rad_ball = RealBall.from_fraction(radius, prec)
    y_low = (center.im - rad_ball).lower()
    deriv = deriv_bound_above(table, M, RealBall._make(y_low, gmpy2.mpfr(0, precision=64), prec), prec)
    two_pi = RealBall.pi(prec) * RealBall.from_int(2, prec)
    variation = deriv * two_pi * rad_ball / RealBall.from_int(segments, prec)
    tsum = TruncatedSum(M, table, prec)
    w, _ = circle_winding_and_min(
        lambda z: eval_FN(tsum, z), center, radius, segments, variation, prec
    )
    return w


# ---------------------------------------------------------------------------
# contour minimum and constants
# ---------------------------------------------------------------------------


def _edge_specs(contour, seg_len):
    """Edges as (orient, fixed, lo, step, npieces); step <= seg_len exactly."""
    x0, x1, y0, y1 = contour
    specs = []
    for orient, fixed, lo, hi in (
        ("h", y0, x0, x1),
        ("h", y1, x0, x1),
        ("v", x0, y0, y1),
        ("v", x1, y0, y1),
    ):
        if hi == lo:
            continue
        length = hi - lo
        n = max(1, int(-((-length) // seg_len)))
        specs.append((orient, fixed, lo, length / n, n))
    if not specs:
        # degenerate rectangle: a single point still gets one piece
        specs = [("h", y0, x0, Fraction(0), 1)]
    return specs


def _alpha_pieces(table, N, spec, k0, k1, prec):
    """Min (lower, upper) of the modulus bound over pieces k0..k1 of an edge."""
    orient, fixed, lo, step, _ = spec
    tsum = TruncatedSum(N, table, prec)
    fixed_ball = RealBall.from_fraction(fixed, prec)
    min_lower = None
    min_upper = None
    for k in range(k0, k1):
        a = lo + k * step
        b = a + step
        moving = RealBall.from_interval(
            RealBall.from_fraction(a, prec).lower(),
            RealBall.from_fraction(b, prec).upper(),
            prec,
        )
        z = (
            ComplexBall(moving, fixed_ball)
            if orient == "h"
            else ComplexBall(fixed_ball, moving)
        )
        m = eval_FN_modulus(tsum, z)
        lo_m, up_m = m.lower(), m.upper()
        if not lo_m > 0:
            raise InconclusiveEnclosure(
                f"piece at {orient}={float(fixed):.6f}, "
                f"[{float(a):.7f},{float(b):.7f}] may contain a zero"
            )
        if min_lower is None or lo_m < min_lower:
            min_lower = lo_m
        if min_upper is None or up_m < min_upper:
            min_upper = up_m
    return min_lower, min_upper


_WORKER_TABLE = None


def _alpha_worker(args):
    spec, k0, k1, N, prec = args
    return _alpha_pieces(_WORKER_TABLE, N, spec, k0, k1, prec)


def contour_alpha(
    contour, N, table, seg_len=DEFAULT_SEG_LEN, prec=DEFAULT_PREC, workers=1, progress=None
):
    """Certified enclosure of the contour minimum of the order-N modulus.

    The rectangle boundary is split into pieces of length ``seg_len``; each
    piece is evaluated as one ball (the segment box), and the minimum of the
    per-piece modulus bounds encloses the true infimum.  ``workers > 1``
    forks piece chunks across processes (fork start method); the minimum is
    order-free, so results are identical to the serial path.
    """
    x0, x1, y0, y1 = (Fraction(v) for v in contour)
    if not (x0 <= x1 and y0 <= y1):
        raise ContourError("degenerate rectangle with inverted corners")
    seg_len = Fraction(seg_len)
    if seg_len <= 0:
        raise ValueError("seg_len must be positive")
    specs = _edge_specs((x0, x1, y0, y1), seg_len)

    results = []
    if workers and workers > 1:
        import multiprocessing as mp

        chunks = []
        for spec in specs:
            n = spec[4]
            size = max(256, -(-n // (4 * workers)))
            chunks.extend((spec, k, min(k + size, n), N, prec) for k in range(0, n, size))
        global _WORKER_TABLE
        _WORKER_TABLE = table
        try:
            with mp.get_context("fork").Pool(workers) as pool:
                for i, res in enumerate(pool.imap_unordered(_alpha_worker, chunks)):
                    results.append(res)
                    if progress is not None:
                        progress(f"chunk {i + 1}/{len(chunks)}")
        finally:
            _WORKER_TABLE = None
    else:
        done = 0
        for spec in specs:
            n = spec[4]
            for k in range(0, n, 50000):
                hi = min(k + 50000, n)
                results.append(_alpha_pieces(table, N, spec, k, hi, prec))
                done += hi - k
                if progress is not None:
                    progress(f"{done} pieces")

    min_lower = min(r[0] for r in results)
    min_upper = min(r[1] for r in results)
    return RealBall.from_interval(min_lower, min_upper, prec)


def _weighted_coefficient_sums(table, N, height, prec):
    """Head and tail sums of |a_n| e^(-w_n height) as balls.

    The tail uses every table entry beyond N plus the zero-density estimate
    above the last ordinate (|a_n| < 1/w_n).
    """
    cache = table.coefficients(prec)
    h = height if isinstance(height, RealBall) else RealBall.from_fraction(Fraction(height), prec)
    head = RealBall.from_int(0, prec)
    for g, m in zip(cache.gammas[:N], cache.moduli[:N]):
        head = head + m * ball_exp(-(g * h))
    tail = RealBall.from_int(0, prec)
    for g, m in zip(cache.gammas[N:], cache.moduli[N:]):
        tail = tail + m * ball_exp(-(g * h))
    shape = PhiShape(decay=_frac(h.lower()), inv_power=1)
    tail = tail + lehman_bound(shape, table.ordinate(len(table)), None, prec)
    return head, tail


def contour_constants(contour, N, table, w_lower, alpha, prec=DEFAULT_PREC):
    """Assemble the validated contour record from its ingredients.

    ``w_lower`` must be a certified lower bound on the imaginary part of the
    verified zero (the bottom of its enclosure box, never the contour top).
    """
    x0, x1, y0, y1 = (Fraction(v) for v in contour)
    w = w_lower if isinstance(w_lower, RealBall) else RealBall._make(w_lower, gmpy2.mpfr(0, precision=64), prec)
    a, b = _weighted_coefficient_sums(table, N, Fraction(y0), prec)
    a_w, b_w = _weighted_coefficient_sums(table, N, w, prec)
    return ContourBounds(x0, x1, y0, y1, N, alpha, a, b, a_w, b_w, w)


# ---------------------------------------------------------------------------
# the modulus inequality
# ---------------------------------------------------------------------------


def _pamina_sides(bounds, q0, prec):
    """(left, right) balls of the contour inequality at integer q0."""
    q = RealBall.from_int(q0, prec)
    pi = RealBall.pi(prec)
    two = RealBall.from_int(2, prec)
    left = two * bounds.a_w * ball_sin(pi / q) + two * pi * bounds.a / q
    right = bounds.alpha - bounds.b - two * bounds.b_w
    return left, right


def pamina_holds(bounds, q0, prec=DEFAULT_PREC):
    """Certified verdict of the inequality at q0.

    True only when the left side's upper bound sits below the right side's
    lower bound, i.e. the inequality holds for every point of every ball.
    The returned q0 is therefore the minimal *certifiable* modulus: wide
    enclosures can only push it upward, never produce an unsound one.
    """
    left, right = _pamina_sides(bounds, q0, prec)
    return not left.upper() > right.lower()


def solve_q0(bounds, prec=DEFAULT_PREC, q_limit=Q0_LIMIT):
    """Smallest integer q0 >= 2 certifiably satisfying the contour inequality.

    Linear scan from 2 (the left side is strictly decreasing in q0, so the
    certified predicate is upward closed); the first hit is minimal, and the
    failure at q0 - 1 is re-checked as a guard.
    """
    q = 2
    while q <= q_limit:
        if pamina_holds(bounds, q, prec):
            if q > 2 and pamina_holds(bounds, q - 1, prec):
                raise QSolveError(f"inequality non-monotone near q0={q}")
            return q
        q += 1
    raise QSolveError(f"no q0 <= {q_limit} satisfies the contour inequality")


def solve_q0_legacy(bounds, prec=DEFAULT_PREC):
    """Modulus from the coarser contour criterion: floor(4 pi a/(alpha-3b)) + 1.

    Requires alpha > 3b; on the paper-style contours this often fails where
    the refined criterion succeeds, which is the point of the comparison.
    """
    three_b = bounds.b * RealBall.from_int(3, bounds.b.prec)
    cmp = ball_compare(bounds.alpha, three_b)
    if cmp is Comparison.INCONCLUSIVE:
        raise InconclusiveEnclosure("alpha vs 3b comparison inconclusive")
    if cmp is Comparison.LESS:
        raise LegacyCriterionError(
            f"legacy criterion infeasible: alpha <= 3b "
            f"({float(bounds.alpha.mid):.8f} vs {float(three_b.mid):.8f})"
        )
    pi = RealBall.pi(prec)
    four = RealBall.from_int(4, prec)
    value = four * pi * bounds.a / (bounds.alpha - three_b)
    q0 = int(gmpy2.floor(value.upper())) + 1
    return max(q0, 1)


def _require_certify_grade(table):
    if not table.certify_grade:
        raise RigorError(
            f"table {table.path} declares error {table.declared_abs_error}, "
            f"coarser than the certification gate 2^-102"
        )


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


def proposal_to_contour(prop):
    """Exact-rational rectangle from a float proposal (heights kept to 9dp)."""
    return (
        Fraction(prop.x0),
        Fraction(prop.x1),
        Fraction(round(prop.y0 * 10**9), 10**9),
        Fraction(round(prop.y1 * 10**9), 10**9),
    )


def run_certification(
    cand,
    table,
    M=4520,
    radius=DEFAULT_RADIUS,
    seg_len=DEFAULT_SEG_LEN,
    prec=DEFAULT_PREC,
    N=None,
    contour=None,
    N_start=10,
    segments=SEGMENTS_START,
    head_order=HEAD_ORDER,
    workers=1,
    log=None,
):
    """Certify a candidate end to end and return the certificate.

    When ``contour``/``N`` are not supplied, the float sweep proposes them.
    Stage failures raise the typed errors of this module, which the CLI maps
    to distinct exit codes.
    """
    from .certificate import assemble_certificate
    from .search import sweep_N

    say = log if log is not None else (lambda s: None)
    _require_certify_grade(table)

    say(f"confirming zero near {complex(cand.position) if isinstance(cand, Candidate) else cand}")
    zero = rouche_verify(
        cand, table, radius=radius, M=M, prec=prec,
        segments=segments, head_order=head_order,
    )
    say(
        f"zero certified: winding {zero.winding}, "
        f"min on circle {float(zero.min_on_circle.lower()):.4e}, "
        f"tail {float(zero.tail_at_circle.upper()):.4e}"
    )

    if contour is None:
        if not isinstance(cand, Candidate):
            raise ContourError("automatic contour proposal needs a scan candidate")
        prop = sweep_N(cand, table, N_start=N_start)
        contour = proposal_to_contour(prop)
        N = prop.N
        say(f"proposed contour N={N}, y0={float(contour[2]):.9f}, y1={float(contour[3]):.9f}")
    elif N is None:
        raise ContourError("an explicit contour also needs its truncation order N")

    x0, x1, y0, y1 = (Fraction(v) for v in contour)
    xi = zero.xi
    if not (
        mpq_lt(x0, xi.re.lower()) and mpq_lt_up(xi.re.upper(), x1)
        and mpq_lt(y0, xi.im.lower()) and mpq_lt_up(xi.im.upper(), y1)
    ):
        raise ContourError("the verified zero does not lie strictly inside the contour")

    def alpha_at(p):
        say(f"bounding contour minimum at {p} bits ({_piece_count((x0, x1, y0, y1), seg_len)} pieces)")
        return contour_alpha((x0, x1, y0, y1), N, table, seg_len=seg_len, prec=p, workers=workers)

    p = prec
    while True:
        try:
            alpha = alpha_at(p)
            say(f"contour minimum >= {float(alpha.lower()):.8f}")
            bounds = contour_constants((x0, x1, y0, y1), N, table, xi.im.lower(), alpha, p)
            q0 = solve_q0(bounds, p)
            break
        except InconclusiveEnclosure as exc:
            if p >= MAX_PREC:
                raise ContourError(f"inconclusive at maximum precision: {exc}") from exc
            p = min(2 * p, MAX_PREC)
            say(f"inconclusive ({exc}); retrying at {p} bits")
    say(f"minimal modulus q0 = {q0}")

    legacy_q0 = None
    legacy_note = None
    try:
        legacy_q0 = solve_q0_legacy(bounds, p)
    except (LegacyCriterionError, InconclusiveEnclosure) as exc:
        legacy_note = str(exc)

    cert = assemble_certificate(
        zero, bounds, q0, table, legacy_q0=legacy_q0, legacy_q0_note=legacy_note, prec=p
    )
    say(
        f"density exponent 2/q0^N >= {float(cert.two_kappa_lower.lower()):.4e}; "
        f"final constant >= {float(cert.final_constant.lower()):.12f}"
    )
    return cert


def _piece_count(contour, seg_len):
    x0, x1, y0, y1 = contour
    per = 2 * ((x1 - x0) + (y1 - y0))
    n = -((-per) // Fraction(seg_len))
    return int(n)


def mpq_lt(frac, m):
    """frac < m with frac a Fraction and m an mpfr, exactly."""
    return gmpy2.mpq(frac.numerator, frac.denominator) < gmpy2.mpq(m)


def mpq_lt_up(m, frac):
    return gmpy2.mpq(m) < gmpy2.mpq(frac.numerator, frac.denominator)
