from fractions import Fraction

import gmpy2
import pytest

from apzeros.balls import RealBall, ball_cabs
from apzeros.zerotable import (
    AnchorError,
    InsufficientZerosError,
    MonotonicityError,
    TableParseError,
    ZeroTable,
    ZeroTableError,
    ZetaZero,
    coefficient,
    load_zero_table,
    write_zero_table,
)

GOOD = """# test table
# declared_abs_error = 1e-15
14.134725141734693790
21.022039638771554993
25.010857580145688763
"""


def write(tmp_path, text, name="z.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoading:
    def test_happy_path(self, tmp_path):
        t = load_zero_table(write(tmp_path, GOOD))
        assert len(t) == 3
        assert t.declared_abs_error == Fraction(1, 10**15)
        g1 = t.ordinate(1)
        assert g1.contains(Fraction("14.134725141734693790"))
        # anchor agreement to ten decimals
        assert g1.lower() > 14.13472514 and g1.upper() < 14.13472515

    def test_indexed_lines(self, tmp_path):
        t = load_zero_table(write(tmp_path, GOOD.replace("14.", "1 14.").replace("21.", "2 21.").replace("25.", "3 25.")))
        assert len(t) == 3

    def test_out_of_order_fails(self, tmp_path):
        bad = GOOD.replace("21.022039638771554993", "25.5").replace(
            "25.010857580145688763", "21.0"
        )
        with pytest.raises(MonotonicityError):
            load_zero_table(write(tmp_path, bad))

    def test_near_duplicates_fail_as_balls(self, tmp_path):
        # distinct decimals closer than the declared error: not provably ordered
        bad = GOOD.replace("21.022039638771554993", "14.134725141734693791")
        with pytest.raises(MonotonicityError):
            load_zero_table(write(tmp_path, bad))

    def test_anchor_violation(self, tmp_path):
        with pytest.raises(AnchorError):
            load_zero_table(write(tmp_path, GOOD.replace("14.134725141734693790", "14.2")))

    def test_insufficient_count(self, tmp_path):
        t = load_zero_table(write(tmp_path, GOOD))
        with pytest.raises(InsufficientZerosError):
            t.ordinate(4)

    def test_parse_error_reports_line(self, tmp_path):
        with pytest.raises(TableParseError, match=r":6:"):
            load_zero_table(write(tmp_path, GOOD + "not-a-number\n"))

    def test_bad_index_sequence(self, tmp_path):
        text = "# declared_abs_error = 1e-15\n1 14.134725141734693790\n3 21.0\n"
        with pytest.raises(TableParseError, match="out of sequence"):
            load_zero_table(write(tmp_path, text))

    def test_missing_error_declaration(self, tmp_path):
        with pytest.raises(ZeroTableError, match="declared_abs_error"):
            load_zero_table(write(tmp_path, "14.134725141734693790\n"))

    def test_argument_overrides_header(self, tmp_path):
        t = load_zero_table(write(tmp_path, GOOD), declared_abs_error=Fraction(1, 10**9))
        assert t.declared_abs_error == Fraction(1, 10**9)


class TestBundled:
    def test_search_table(self, search_table):
        assert len(search_table) == 1000
        assert not search_table.certify_grade
        assert search_table.declared_abs_error <= Fraction(1, 10**15)

    def test_certify_table(self, certify_table):
        assert len(certify_table) >= 4520
        assert certify_table.certify_grade
        assert certify_table.declared_abs_error <= Fraction(1, 2**102)
        assert certify_table.rh_verified_height == Fraction(3) * 10**10
        # exactly 4520 ordinates below 5000
        assert certify_table.ordinate(4520).upper() < 5000
        assert certify_table.ordinate(4521).lower() > 5000

    def test_round_trip(self, tmp_path, search_table):
        out = tmp_path / "again.txt"
        write_zero_table(search_table, out)
        again = load_zero_table(out)
        assert again.source_digest == search_table.source_digest
        assert all(
            a.ordinate == b.ordinate for a, b in zip(again.zeros, search_table.zeros)
        )

    def test_coefficient_decay(self, search_table):
        cache = search_table.coefficients()
        g1_low = gmpy2.mpq(cache.gammas[0].lower())
        for g, m in zip(cache.gammas, cache.moduli):
            assert gmpy2.mpq(m.upper()) < 1 / gmpy2.mpq(g.lower())
            assert gmpy2.mpq(g.lower()) >= g1_low


class TestCoefficients:
    def test_first_coefficient_modulus(self, certify_table):
        a1, _ = coefficient(1, certify_table)
        m = ball_cabs(a1)
        # frozen from 1/sqrt(1/4 + gamma_1^2) at 60 digits; the oracle print
        # carries ~1e-30 of its own rounding
        oracle = Fraction("0.0707035277318122206689856923702")
        assert abs(Fraction(str(gmpy2.mpq(m.mid))) - oracle) < Fraction(1, 10**28)
        assert m.rad < 1e-30

    def test_first_frequency(self, certify_table):
        _, w1 = coefficient(1, certify_table)
        assert abs(float(w1.mid) - 14.1347251417) < 1e-9

    def test_synthetic_unit_zero(self):
        # single synthetic frequency 1: coefficient is exactly 1/(1/2+i) = 0.4 - 0.8i
        t = ZeroTable(
            [ZetaZero(1, RealBall.from_int(1))],
            Fraction(1, 10**30),
            "synthetic",
        )
        a, w = coefficient(1, t)
        assert a.re.contains(Fraction(2, 5))
        assert a.im.contains(Fraction(-4, 5))
        assert w.contains(1)
