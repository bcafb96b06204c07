"""Truncated-sum model: evaluation containment, tail bounds, zero-free strip."""

import math
import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apzeros.balls import (
    ComplexBall,
    InconclusiveEnclosure,
    RealBall,
    ball_cabs,
    _mpfr_to_decimal,
)
from apzeros.fsum import (
    PhiShape,
    TruncatedSum,
    ZeroFreeVerdict,
    eval_FN,
    eval_FN_deriv,
    eval_FN_modulus,
    eval_FN_pair,
    lehman_bound,
    tail_bound_partial_rh,
    tail_bound_rh,
    zero_free_check,
)
from apzeros.zerotable import ZeroTable, ZetaZero

Y0_STAR = Fraction("0.0669574675")


def to_mp(x):
    return mpmath.mpf(_mpfr_to_decimal(x))


def unit_table():
    return ZeroTable(
        [ZetaZero(1, RealBall.from_int(1))], Fraction(1, 10**30), "synthetic"
    )


class TestEvaluation:
    def test_empty_sum_is_exact_zero(self, certify_table):
        f = eval_FN(TruncatedSum(0, certify_table), ComplexBall.exact(1, 1))
        assert f.re.is_exact() and f.re.mid == 0
        assert f.im.is_exact() and f.im.mid == 0

    def test_decay_in_height(self, certify_table):
        ts = TruncatedSum(50, certify_table)
        uppers = [
            float(ball_cabs(eval_FN(ts, ComplexBall.from_complex(complex(100.0, y)))).upper())
            for y in (0.5, 1.0, 2.0, 4.0)
        ]
        assert uppers == sorted(uppers, reverse=True)

    def test_synthetic_derivative(self):
        # one frequency-1 term: F'(0) = i a = i(0.4 - 0.8i) = 0.8 + 0.4i
        d = eval_FN_deriv(TruncatedSum(1, unit_table()), ComplexBall.exact(0, 0))
        assert d.re.contains(Fraction(4, 5))
        assert d.im.contains(Fraction(2, 5))

    def test_derivative_nonzero_at_search_point(self, certify_table):
        # the Newton step at the paper-scale point is well defined
        z = ComplexBall.from_complex(14685.516156148412 + 0.0798325j)
        d = eval_FN_deriv(TruncatedSum(1000, certify_table), z)
        assert ball_cabs(d).lower() > 0

    def test_truncation_consistency(self, certify_table):
        rng = random.Random(11)
        for _ in range(5):
            z = ComplexBall.from_complex(
                complex(rng.uniform(10, 2000), rng.uniform(0.05, 0.5))
            )
            n, m = 20, 200
            fn = eval_FN(TruncatedSum(n, certify_table), z)
            fm = eval_FN(TruncatedSum(m, certify_table), z)
            diff = ball_cabs(fm - fn)
            bound = tail_bound_rh(certify_table, n, z.im)
            assert diff.upper() <= bound.upper()

    def test_finite_difference_derivative(self, certify_table):
        rng = random.Random(5)
        ts = TruncatedSum(100, certify_table)
        for _ in range(5):
            x, y = rng.uniform(50, 500), rng.uniform(0.1, 0.5)
            h = 1e-6
            f_plus = complex(eval_FN(ts, ComplexBall.from_complex(complex(x + h, y))))
            f_minus = complex(eval_FN(ts, ComplexBall.from_complex(complex(x - h, y))))
            fd = (f_plus - f_minus) / (2 * h)
            d = complex(eval_FN_deriv(ts, ComplexBall.from_complex(complex(x, y))))
            assert abs(fd - d) <= 1e-8 * max(1.0, abs(d))

    def test_pair_matches_separate_calls(self, certify_table):
        ts = TruncatedSum(30, certify_table)
        z = ComplexBall.from_complex(100.25 + 0.125j)
        f, d = eval_FN_pair(ts, z)
        assert f == eval_FN(ts, z)
        assert d == eval_FN_deriv(ts, z)

    def test_containment_against_oracle(self, certify_table):
        rng = random.Random(3)
        ts = TruncatedSum(40, certify_table)
        with mpmath.workdps(90):
            gam = [to_mp(g.mid) for g in certify_table.coefficients().gammas[:40]]
            for _ in range(10):
                x = rng.uniform(10, 5000)
                y = rng.uniform(0.01, 1.0)
                f = eval_FN(ts, ComplexBall.from_complex(complex(x, y)))
                zz = mpmath.mpc(mpmath.mpf(x), mpmath.mpf(y))
                val = sum(
                    mpmath.exp(1j * g * zz) / (mpmath.mpf(1) / 2 + 1j * g) for g in gam
                )
                assert to_mp(f.re.lower()) <= val.real <= to_mp(f.re.upper())
                assert to_mp(f.im.lower()) <= val.imag <= to_mp(f.im.upper())

    def test_modulus_evaluator_contains_box_result(self, certify_table):
        ts = TruncatedSum(11, certify_table)
        rng = random.Random(17)
        for _ in range(10):
            cx, cy = rng.uniform(14685.4, 14685.6), rng.uniform(0.06, 0.13)
            z = ComplexBall(
                RealBall.from_interval(cx - 5e-7, cx + 5e-7),
                RealBall.from_interval(cy, cy),
            )
            disc = eval_FN_modulus(ts, z)
            box = ball_cabs(eval_FN(ts, z))
            # both enclose the truth; the disc route must not be looser
            assert disc.lower() >= box.lower()
            assert float(disc.upper()) <= float(box.upper()) * (1 + 1e-10)


class TestLehman:
    def test_brute_force_is_below_bound(self, certify_table):
        shape = PhiShape(decay=Fraction(1, 20), inv_power=1)
        bound = lehman_bound(shape, 2000, 3000)
        cache = certify_table.coefficients()
        total = RealBall.from_int(0)
        y = RealBall.from_fraction(Fraction(1, 20))
        for g in cache.gammas:
            if 2000 <= float(g.mid) <= 3000:
                from apzeros.balls import ball_exp

                total = total + ball_exp(-(g * y)) / g
        assert total.upper() < bound.upper()

    def test_random_subranges(self, certify_table):
        from apzeros.balls import ball_exp

        rng = random.Random(2024)
        cache = certify_table.coefficients()
        mids = [float(g.mid) for g in cache.gammas]
        for _ in range(6):
            t1 = rng.uniform(20, 4000)
            t2 = t1 + rng.uniform(100, 900)
            decay = rng.choice([Fraction(3, 100), Fraction(7, 100), Fraction(1, 5)])
            bound = lehman_bound(PhiShape(decay=decay, inv_power=1), Fraction(t1), Fraction(t2))
            total = RealBall.from_int(0)
            y = RealBall.from_fraction(decay)
            for g, m in zip(cache.gammas, mids):
                if t1 <= m <= t2:
                    total = total + ball_exp(-(g * y)) / g
            assert total.upper() < bound.upper()

    def test_f_zeros_lemma_tail(self, certify_table):
        shape = PhiShape(decay=Fraction("0.0841"), inv_power=1)
        bound = lehman_bound(shape, certify_table.ordinate(1000))
        assert float(bound.upper()) <= 5e-54

    def test_below_two_pi_e_rejected(self):
        with pytest.raises(InconclusiveEnclosure):
            lehman_bound(PhiShape(decay=Fraction(1, 10), inv_power=1), 10)

    def test_constant_phi_rejected(self):
        with pytest.raises(ValueError):
            PhiShape(decay=Fraction(0))

    def test_unsupported_shape_rejected(self):
        with pytest.raises(ValueError):
            PhiShape(decay=Fraction(1), inv_power=3)

    def test_zero_decay_needs_finite_limit(self):
        shape = PhiShape(decay=Fraction(0), inv_power=2)
        with pytest.raises(InconclusiveEnclosure):
            lehman_bound(shape, 100)
        assert float(lehman_bound(shape, 100, 200).upper()) > 0


class TestTails:
    def test_huge_height_is_tiny(self, certify_table):
        bound = tail_bound_rh(certify_table, 100, Fraction(10**4))
        assert float(gmpy2.log2(bound.upper())) < -9000

    def test_reproduces_reference_tail_constant(self, certify_table):
        # explicit terms + density tail at the corrected contour bottom; the
        # 1/w_n majorant sits ~6e-8 above the |a_n| sum it dominates
        bound = tail_bound_rh(certify_table, 11, Y0_STAR)
        assert 0.0021271 < float(bound.upper()) < 0.0021272

    def test_circle_tail_constant(self, certify_table):
        x = RealBall.from_decimal("14685.5161571")
        y = RealBall.from_decimal("0.0798317935")
        bound = tail_bound_partial_rh(certify_table, 4520, x, y)
        assert float(bound.upper()) < 4e-176

    def test_unconditional_matches_plain_tail(self, certify_table):
        y = Fraction(1, 10)
        a = tail_bound_rh(certify_table, 1000, y)
        b = tail_bound_partial_rh(certify_table, 1000, 0, y, float("inf"))
        assert abs(float(a.upper()) - float(b.upper())) <= 1e-30 * float(a.upper())

    def test_zero_real_part_drops_prefactor(self, certify_table):
        y = Fraction(1, 10)
        T = certify_table.rh_verified_height
        with_x = tail_bound_partial_rh(certify_table, 1000, 20, y, T)
        no_x = tail_bound_partial_rh(certify_table, 1000, 0, y, T)
        assert float(no_x.upper()) <= float(with_x.upper())

    def test_nonpositive_height_rejected(self, certify_table):
        with pytest.raises(InconclusiveEnclosure):
            tail_bound_rh(certify_table, 10, Fraction(0))


class TestZeroFree:
    def test_strip_verdict(self, certify_table):
        r = zero_free_check(certify_table, Fraction("0.0841"), 1000)
        assert r.verdict is ZeroFreeVerdict.ZERO_FREE
        assert float(r.first_term.lower()) > 0.021536
        assert float(r.explicit_rest.upper()) < 0.021528
        assert float(r.density_tail.upper()) <= 5e-54

    def test_low_strip_inconclusive(self, certify_table):
        r = zero_free_check(certify_table, Fraction(1, 100), 1000)
        assert r.verdict is ZeroFreeVerdict.INCONCLUSIVE

    def test_high_strip_few_terms(self, certify_table):
        r = zero_free_check(certify_table, 1, 10)
        assert r.verdict is ZeroFreeVerdict.ZERO_FREE
