import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import iv

from cohenperiods.enclosure import (
    DEFAULT_MAX_PREC_BITS,
    INCONCLUSIVE,
    INITIAL_PREC_BITS,
    PROVED,
    VIOLATED,
    certify,
    compare_le,
    compare_lt,
    endpoint_fractions,
    float_endpoints,
    interval_precision,
    iv_fraction,
    iv_log,
    iv_root,
    precision_ladder,
    zeta_interval,
)


def contains(interval, value: Fraction) -> bool:
    lo, hi = endpoint_fractions(interval)
    return lo <= value <= hi


class TestConversions:
    def test_fraction_roundtrip_containment(self):
        with interval_precision(53):
            for q in (Fraction(1, 3), Fraction(-7, 11), Fraction(2**80 + 1), Fraction(355, 113)):
                x = iv_fraction(q)
                assert contains(x, q)

    def test_float_endpoints_outward(self):
        with interval_precision(213):
            lo, hi = float_endpoints(iv.pi)
            assert lo < math.pi < hi

    def test_huge_integer_containment(self):
        with interval_precision(53):
            n = 10**50 + 12345
            assert contains(iv_fraction(n), Fraction(n))


class TestZeta:
    @pytest.mark.parametrize("s", [2, 3, 5, 7, 9, 13])
    def test_contains_reference_value(self, s):
        mpmath.mp.prec = 260
        reference = Fraction(str(mpmath.nstr(mpmath.zeta(s), 70)))
        with interval_precision(213):
            z = zeta_interval(s)
            lo, hi = endpoint_fractions(z)
            # reference is itself a 70-digit rounding: allow its tiny slack
            slack = Fraction(1, 10**60)
            assert lo - slack <= reference <= hi + slack

    def test_width_shrinks_with_terms(self):
        with interval_precision(213):
            wide = zeta_interval(3, terms=64)
            narrow = zeta_interval(3, terms=2048)
            wlo, whi = endpoint_fractions(wide)
            nlo, nhi = endpoint_fractions(narrow)
            assert nhi - nlo < whi - wlo
            assert wlo <= nlo and nhi <= whi  # nested enclosures

    def test_rejects_s_below_two(self):
        with pytest.raises(ValueError):
            zeta_interval(1)


class TestRoots:
    def test_square_and_cube(self):
        with interval_precision(106):
            r2 = iv_root(2, 2)
            lo, hi = endpoint_fractions(r2)
            assert lo * lo <= 2 <= hi * hi
            r3 = iv_root(Fraction(27, 8), 3)
            lo, hi = endpoint_fractions(r3)
            assert contains(r3, Fraction(3, 2))
            assert hi - lo < Fraction(1, 10**25)


class TestComparisons:
    def test_exact_sides(self):
        assert compare_le(0, 0) == PROVED
        assert compare_lt(0, 0) == VIOLATED
        assert compare_le(Fraction(1, 2), Fraction(1, 3)) == VIOLATED

    def test_exact_vs_point_interval(self):
        with interval_precision(106):
            assert compare_le(0, iv_log(1)) == PROVED
            assert compare_le(Fraction(1), iv_fraction(1)) == PROVED

    def test_interval_separation(self):
        with interval_precision(106):
            assert compare_lt(iv.pi, iv_fraction(Fraction(355, 113))) == PROVED
            assert compare_lt(iv_fraction(Fraction(355, 113)), iv.pi) == VIOLATED

    def test_overlap_is_inconclusive(self):
        with interval_precision(53):
            assert compare_lt(iv.pi, iv.pi) == INCONCLUSIVE


class TestCertify:
    def test_ladder_shape(self):
        ladder = list(precision_ladder(4096))
        assert ladder[0] == INITIAL_PREC_BITS
        assert ladder[-1] == 4096
        assert all(b <= 4096 for b in ladder)
        assert list(precision_ladder(213)) == [213]

    def test_escalation_resolves_tight_comparison(self):
        # pi vs a 40-digit rational neighbour: undecidable at 213 bits? no,
        # decidable; use a 70-digit neighbour to force at least one doubling
        mpmath.mp.prec = 350
        close = Fraction(str(mpmath.nstr(mpmath.pi, 75)))
        calls = []

        def check():
            calls.append(iv.prec)
            return compare_lt(iv.pi, iv_fraction(close))

        verdict = certify(check, DEFAULT_MAX_PREC_BITS)
        assert verdict in (PROVED, VIOLATED)
        assert calls[0] == INITIAL_PREC_BITS

    def test_gives_up_at_ceiling(self):
        def check():
            return compare_lt(iv.pi, iv.pi)

        assert certify(check, 426) == INCONCLUSIVE
