"""Certification machinery at reduced scale (full scale runs in acceptance)."""

from fractions import Fraction

import gmpy2
import pytest

from apzeros.balls import (
    Comparison,
    ComplexBall,
    InconclusiveEnclosure,
    RealBall,
    ball_compare,
)
from apzeros.rigor import (
    ContourBounds,
    ContourError,
    LegacyCriterionError,
    QSolveError,
    RoucheError,
    circle_winding_and_min,
    contour_alpha,
    contour_constants,
    deriv_bound_above,
    refine_candidate,
    rouche_verify,
    solve_q0,
    solve_q0_legacy,
    winding_number,
)
from apzeros.search import Candidate

PREC = 128


def power_eval(k):
    def ev(z):
        out = z
        for _ in range(k - 1):
            out = out * z
        return out

    return ev


def power_variation(k, radius, segments, prec):
    rb = RealBall.from_fraction(radius, prec)
    dbound = RealBall.from_int(k, prec)
    for _ in range(k - 1):
        dbound = dbound * rb
    two_pi = RealBall.pi(prec) * RealBall.from_int(2, prec)
    return dbound * two_pi * rb / RealBall.from_int(segments, prec)


class TestWinding:
    @pytest.mark.parametrize("k", [1, 2, 3])
    @pytest.mark.parametrize("radius", [Fraction(1), Fraction(1, 7), Fraction(5, 2)])
    def test_power_maps(self, k, radius):
        center = ComplexBall.exact(0, 0, PREC)
        segments = 64
        w, min_ball = circle_winding_and_min(
            power_eval(k), center, radius, segments,
            power_variation(k, radius, segments, PREC), PREC,
        )
        assert w == k
        # |z^k| = r^k on the circle
        assert min_ball.contains(Fraction(radius.numerator, radius.denominator) ** k)

    def test_sum_order_winding_around_refined_zero(self, certify_table, paper_candidate):
        center = refine_candidate(paper_candidate, certify_table, M=200)
        w = winding_number(200, certify_table, center, Fraction(1, 2**20), segments=512)
        assert w == 1

    def test_off_zero_circle_has_winding_zero(self, certify_table, paper_candidate):
        center = refine_candidate(paper_candidate, certify_table, M=200)
        shifted = ComplexBall(
            center.re + RealBall.from_decimal("0.00001"), center.im
        )
        w = winding_number(200, certify_table, shifted, Fraction(1, 2**20), segments=512)
        assert w == 0


class TestRefine:
    def test_step_contracts_to_fixed_point(self, certify_table, paper_candidate):
        c1 = refine_candidate(paper_candidate, certify_table, M=200)
        c2 = refine_candidate(c1, certify_table, M=200)
        c3 = refine_candidate(c2, certify_table, M=200)
        move12 = abs(complex(c2) - complex(c1))
        move23 = abs(complex(c3) - complex(c2))
        assert abs(complex(c1) - paper_candidate.position) < 2.0**-20
        assert move12 < 1e-11
        assert move23 < 1e-16  # quadratic contraction onto the fixed point

    def test_search_grade_table_refused(self, search_table, paper_candidate):
        from apzeros.rigor import RigorError

        with pytest.raises(RigorError, match="2\\^-102"):
            refine_candidate(paper_candidate, search_table, M=200)


class TestRouche:
    def test_reduced_order_verification(self, certify_table, paper_candidate):
        vz = rouche_verify(
            paper_candidate, certify_table, M=200, segments=512, head_order=512
        )
        assert vz.winding == 1
        assert ball_compare(vz.min_on_circle, vz.tail_at_circle) is Comparison.GREATER
        assert float(vz.w_lower) > 0.0798
        # enclosure covers the disc
        assert float(vz.xi.re.upper()) - float(vz.xi.re.lower()) >= 2 * float(vz.radius_used)

    def test_perturbed_candidate_fails(self, certify_table):
        bad = Candidate(14685.517156 + 0.0798j, 14685.5, 0, 1000)
        with pytest.raises(RoucheError, match="winding"):
            rouche_verify(bad, certify_table, M=200, segments=512, head_order=512)


class TestContourAlpha:
    def test_monotone_under_subdivision(self, certify_table, paper_contour):
        coarse = contour_alpha(paper_contour, 11, certify_table, seg_len=Fraction(1, 25000))
        fine = contour_alpha(paper_contour, 11, certify_table, seg_len=Fraction(1, 50000))
        assert fine.lower() >= coarse.lower()

    def test_degenerate_rectangle(self, certify_table, paper_contour):
        x0, _, y0, y1 = paper_contour
        alpha = contour_alpha((x0, x0, y0, y1), 11, certify_table, seg_len=Fraction(1, 10000))
        assert float(alpha.lower()) > 0

    def test_contour_through_zero_is_inconclusive(self, certify_table):
        # bottom edge through the order-11 sum's own zero
        u, v = Fraction("14685.5166254034"), Fraction("0.0793966575")
        w = Fraction(1, 10**4)
        with pytest.raises(InconclusiveEnclosure):
            contour_alpha((u - w, u + w, v, v + w), 11, certify_table, seg_len=w)

    def test_workers_match_serial(self, certify_table, paper_contour):
        serial = contour_alpha(paper_contour, 11, certify_table, seg_len=Fraction(1, 20000))
        forked = contour_alpha(
            paper_contour, 11, certify_table, seg_len=Fraction(1, 20000), workers=2
        )
        assert serial == forked


class TestConstants:
    def test_same_height_collapses(self, certify_table, paper_contour):
        x0, x1, y0, y1 = paper_contour
        # alpha is irrelevant here; make it large enough to pass validation
        alpha = RealBall.from_int(1)
        w = RealBall.from_fraction(y0)
        b = contour_constants((x0, x1, y0, y1), 11, certify_table, w, alpha)
        assert b.a == b.a_w
        assert b.b == b.b_w

    def test_full_order_tail_is_density_only(self, certify_table, paper_contour):
        x0, x1, y0, y1 = paper_contour
        alpha = RealBall.from_int(1)
        w = RealBall.from_fraction(Fraction("0.0798317"))
        n = len(certify_table)
        b = contour_constants((x0, x1, y0, y1), n, certify_table, w, alpha)
        assert float(b.b.upper()) < 1e-140

    def test_tail_at_zero_height_below_bottom_tail(self, certify_table, paper_contour):
        x0, x1, y0, y1 = paper_contour
        alpha = RealBall.from_decimal("0.00517", extra_rad=1e-8)
        w = RealBall.from_fraction(Fraction("0.0798317"))
        b = contour_constants((x0, x1, y0, y1), 11, certify_table, w, alpha)
        assert b.b_w.upper() <= b.b.upper()

    def test_wide_rectangle_rejected(self, certify_table):
        alpha = RealBall.from_int(1)
        with pytest.raises(ContourError):
            ContourBounds(
                Fraction(0), Fraction(3, 2), Fraction(1, 100), Fraction(2, 100), 1,
                alpha, alpha, RealBall.from_int(0), alpha, RealBall.from_int(0),
                RealBall.from_decimal("0.015"),
            )


def make_bounds(alpha, a, b, a_w, b_w):
    return ContourBounds(
        Fraction(0), Fraction(1, 10), Fraction(1, 100), Fraction(2, 100), 11,
        alpha, a, b, a_w, b_w, RealBall.from_decimal("0.015"),
    )


class TestSolveQ0:
    def test_zero_coefficients_give_two(self):
        zero = RealBall.from_int(0)
        bounds = make_bounds(RealBall.from_int(1), zero, zero, zero, zero)
        assert solve_q0(bounds) == 2

    def test_threshold_at_limit(self):
        prec = 256
        pi = RealBall.pi(prec)
        q = RealBall.from_int(10**6, prec)
        q1 = RealBall.from_int(10**6 - 1, prec)
        from apzeros.balls import ball_sin

        lo = ball_sin(pi / q) * RealBall.from_int(2, prec)
        hi = ball_sin(pi / q1) * RealBall.from_int(2, prec)
        target = (lo + hi) / RealBall.from_int(2, prec)
        zero = RealBall.from_int(0, prec)
        one = RealBall.from_int(1, prec)
        bounds = make_bounds(target, zero, zero, one, zero)
        assert solve_q0(bounds) == 10**6

    def test_no_solution_raises(self):
        prec = 256
        tiny = RealBall.from_decimal("1e-9", prec=prec)
        zero = RealBall.from_int(0, prec)
        one = RealBall.from_int(1, prec)
        bounds = make_bounds(tiny, zero, zero, one, zero)
        with pytest.raises(QSolveError):
            solve_q0(bounds, q_limit=10**4)


class TestLegacy:
    def test_four_b_case(self):
        # alpha = 4b, a = b: q0 = floor(4 pi) + 1 = 13
        b = RealBall.from_fraction(Fraction(1, 10))
        alpha = RealBall.from_fraction(Fraction(4, 10))
        zero = RealBall.from_int(0)
        bounds = make_bounds(alpha, b, b, zero, zero)
        assert solve_q0_legacy(bounds) == 13

    def test_exact_unit_ratio(self):
        # alpha - 3b = 4 pi a: quotient is 1, so q0 = 2
        prec = 256
        a = RealBall.from_fraction(Fraction(1, 100), prec)
        four_pi_a = RealBall.from_int(4, prec) * RealBall.pi(prec) * a
        b = RealBall.from_fraction(Fraction(1, 50), prec)
        alpha = four_pi_a + b + b + b
        zero = RealBall.from_int(0, prec)
        bounds = make_bounds(alpha, a, b, zero, zero)
        assert solve_q0_legacy(bounds) == 2

    def test_infeasible_when_alpha_below_3b(self):
        b = RealBall.from_fraction(Fraction(1, 10))
        alpha = RealBall.from_fraction(Fraction(25, 100))
        bounds = make_bounds(alpha, b, b, RealBall.from_int(0), RealBall.from_int(0))
        with pytest.raises(LegacyCriterionError):
            solve_q0_legacy(bounds)


def test_derivative_bound_decreases_with_height(certify_table):
    lo = deriv_bound_above(certify_table, 100, Fraction(1, 100))
    hi = deriv_bound_above(certify_table, 100, Fraction(1, 2))
    assert hi.upper() < lo.lower()
