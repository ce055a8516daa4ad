import math
from fractions import Fraction

import mpmath
import pytest
import sympy

from cohenperiods import (
    FundDisc,
    approx_L,
    bernoulli,
    decompose,
    dirichlet_L_neg,
    gen_bernoulli,
    hurwitz_H,
    kronecker,
)
from cohenperiods.classnum import (
    BernoulliTable,
    _factorize,
    approx_L_truncation_bound,
    divisors,
    is_fundamental,
    mobius,
    sigma,
)
from cohenperiods import enclosure
from cohenperiods.enclosure import PROVED, certify, compare_le, iv_fraction, iv_log, zeta_interval
from mpmath import iv


FUNDAMENTALS_40 = [D for D in range(-40, 41) if D != 0 and (D == 1 or is_fundamental(D))]


class TestKronecker:
    def test_examples(self):
        assert kronecker(-3, 2) == -1
        assert kronecker(-4, 3) == -1
        for D in (-3, -4, 1, 5, -20, 997):
            assert kronecker(D, 1) == 1

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            kronecker(-3, 0)

    def test_prime_case_matches_euler_criterion(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23):
            for D in range(-30, 31):
                expected = pow(D % p, (p - 1) // 2, p)
                expected = -1 if expected == p - 1 else expected
                assert kronecker(D, p) == expected, (D, p)

    def test_two_rule(self):
        for D in range(-40, 41):
            if D % 2 == 0:
                assert kronecker(D, 2) == 0
            elif D % 8 in (1, 7):
                assert kronecker(D, 2) == 1
            else:
                assert kronecker(D, 2) == -1

    def test_completely_multiplicative(self):
        for D in FUNDAMENTALS_40:
            for a in range(1, 30):
                for b in range(1, 30):
                    assert kronecker(D, a * b) == kronecker(D, a) * kronecker(D, b)

    def test_periodic_mod_abs_D(self):
        for D in FUNDAMENTALS_40:
            q = abs(D)
            for d in range(1, 1001):
                assert kronecker(D, d) == kronecker(D, d + q), (D, d)


class TestDecompose:
    def test_examples(self):
        assert decompose(-3) == FundDisc(-3, 1)
        assert decompose(-12) == FundDisc(-3, 2)
        assert decompose(-16) == FundDisc(-4, 2)
        assert decompose(9) == FundDisc(1, 3)

    def test_rejects_bad_residues(self):
        for M in (-5, -6, 2, 3, -2, 7):
            if M % 4 in (0, 1):
                continue
            with pytest.raises(ValueError):
                decompose(M)
        with pytest.raises(ValueError):
            decompose(0)

    def test_invariants_up_to_10000(self):
        for M in range(-10**4, 10**4 + 1):
            if M == 0 or M % 4 not in (0, 1):
                continue
            fd = decompose(M)
            assert fd.D * fd.f**2 == M
            assert fd.f >= 1
            assert fd.D == 1 or is_fundamental(fd.D)


class TestBernoulli:
    def test_examples(self):
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(12) == Fraction(-691, 2730)

    def test_odd_vanish(self):
        for n in range(3, 101, 2):
            assert bernoulli(n) == 0

    def test_defining_recurrence(self):
        # sum_{j=0}^{n} C(n+1, j) B_j = 0 for every n >= 1
        for n in range(1, 401):
            total = sum(math.comb(n + 1, j) * bernoulli(j) for j in range(n + 1))
            assert total == 0, n

    def test_von_staudt_clausen_denominators(self):
        for n in range(2, 201, 2):
            expected = 1
            for p in range(2, n + 2):
                if sympy.isprime(p) and n % (p - 1) == 0:
                    expected *= p
            assert bernoulli(n).denominator == expected, n

    def test_against_mpmath_bernfrac(self):
        for n in (20, 50, 100, 250, 600):
            p, q = mpmath.bernfrac(n)
            assert bernoulli(n) == Fraction(int(p), int(q))

    def test_against_sympy(self):
        for n in (14, 30, 98):
            assert bernoulli(n) == Fraction(sympy.bernoulli(n))

    def test_cache_roundtrip(self, tmp_path):
        table = BernoulliTable()
        table.extend_to(40)
        path = tmp_path / "bern.txt"
        table.save(str(path))
        text = path.read_text().splitlines()
        assert text[0] == "bernoulli-cache v1 max=40"
        assert text[1] == "0 1 1"
        assert text[2] == "1 -1 2"
        assert len(text) == 42
        loaded = BernoulliTable.load(str(path))
        for n in range(41):
            assert loaded[n] == table[n]

    def test_load_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("something else\n")
        with pytest.raises(ValueError):
            BernoulliTable.load(str(path))


class TestGenBernoulli:
    def test_examples(self):
        assert gen_bernoulli(1, -4) == Fraction(-1, 2)
        assert gen_bernoulli(3, -3) == Fraction(2, 3)
        assert gen_bernoulli(2, 1) == Fraction(1, 6)

    def test_classical_first_values(self):
        # B_{1,chi} = (1/|D|) sum chi(a) a for odd primitive chi
        for D in (-3, -4, -7, -8, -11, -15):
            q = abs(D)
            expected = Fraction(sum(kronecker(D, a) * a for a in range(1, q + 1)), q)
            assert gen_bernoulli(1, D) == expected

    def test_rejects_non_fundamental(self):
        with pytest.raises(ValueError):
            gen_bernoulli(3, -6)

    def test_trivial_character_reduces_to_bernoulli(self):
        for r in (2, 3, 4, 6):
            assert gen_bernoulli(r, 1) == bernoulli(r)


class TestDirichletL:
    def test_examples(self):
        assert dirichlet_L_neg(1, -4) == Fraction(1, 2)
        assert dirichlet_L_neg(3, -3) == Fraction(-2, 9)
        assert dirichlet_L_neg(1, -3) == Fraction(1, 3)

    def test_zeta_values_through_trivial_character(self):
        # L(1-r, chi_1) = zeta(1-r) = -B_r / r
        assert dirichlet_L_neg(2, 1) == Fraction(-1, 12)
        assert dirichlet_L_neg(4, 1) == Fraction(1, 120)


class TestHurwitz:
    def test_examples(self):
        assert hurwitz_H(1, 0) == Fraction(-1, 12)
        assert hurwitz_H(3, 3) == Fraction(-2, 9)
        assert hurwitz_H(3, 5) == 0
        assert hurwitz_H(3, 0) == Fraction(-1, 252)

    def test_rejects_even_or_nonpositive_r(self):
        for r in (0, -1, 2, 4):
            with pytest.raises(ValueError):
                hurwitz_H(r, 3)
        with pytest.raises(ValueError):
            hurwitz_H(3, -1)

    def test_classical_hurwitz_class_numbers(self):
        # r = 1 reproduces the classical Hurwitz class numbers H(N)
        expected = {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1,
                    11: 1, 12: Fraction(4, 3), 15: 2, 16: Fraction(3, 2),
                    19: 1, 20: 2, 23: 3, 24: 2}
        for N, h in expected.items():
            assert hurwitz_H(1, N) == h, N

    def test_vanishes_on_excluded_residues(self):
        for r in (1, 3, 5):
            for N in range(1, 101):
                if N % 4 in (1, 2):
                    assert hurwitz_H(r, N) == 0, (r, N)
                else:
                    # -N = 0, 3 mod 4 never vanishes: L(1-r, chi_D) != 0
                    assert hurwitz_H(r, N) != 0, (r, N)

    def test_magnitude_bound(self):
        # |H(r,N)| <= (r-1)! zeta(2r-1) zeta(r) N^(2r-1/2) log N / (2^(r-1) pi^r)
        for r in (3, 5, 7):
            for N in range(1, 101):
                value = abs(hurwitz_H(r, N))

                def check(r=r, N=N, value=value):
                    if N == 1:
                        bound = iv_fraction(0)
                    else:
                        bound = (
                            iv_fraction(Fraction(math.factorial(r - 1), 2 ** (r - 1)))
                            * zeta_interval(2 * r - 1)
                            * zeta_interval(r)
                            / iv.pi**r
                            * iv.sqrt(iv_fraction(N)) ** (4 * r - 1)
                            * iv_log(N)
                        )
                    return compare_le(value, bound)

                assert certify(check) == PROVED, (r, N)


class TestApproxL:
    def test_closed_form_chi_minus3(self):
        value = approx_L(3, -3, 10**6)
        closed = 4 * math.pi**3 / (81 * math.sqrt(3))
        assert abs(value - closed) < 1e-12

    def test_trivial_character_is_zeta(self):
        value = approx_L(2, 1, 10**6)
        assert abs(value - math.pi**2 / 6) < 2e-6  # truncation-bound dominated

    def test_truncation_bound(self):
        coarse = approx_L(5, -4, 10**4)
        fine = approx_L(5, -4, 10**5)
        assert abs(coarse - fine) <= approx_L_truncation_bound(5, 10**4)
        assert abs(coarse - fine) < 1e-15

    def test_rejects_r_below_two(self):
        with pytest.raises(ValueError):
            approx_L(1, -3, 100)


class TestAnalyticCrossCheck:
    def test_H_matches_functional_equation_form(self):
        # |H(r,N)| = (r-1)! N^(r-1/2) f^(1-2r) |L(r, chi_D)| |mobius sum|
        #            / (2^(r-1) pi^r);
        # the f^(1-2r) normalizes each h(r, N/d^2) term to its own
        # (N/d^2)^(r-1/2) scale (without it the identity fails for f > 1)
        for r in (3, 5):
            for N in (3, 4, 7, 12, 15, 16):
                fd = decompose(-N)
                mob = sum(
                    mobius(d) * kronecker(fd.D, d) * d ** (r - 1) * sigma(2 * r - 1, fd.f // d)
                    for d in divisors(fd.f)
                )
                analytic = (
                    math.factorial(r - 1)
                    * N ** (r - 0.5)
                    * float(Fraction(1, fd.f ** (2 * r - 1)))
                    * abs(approx_L(r, fd.D, 10**6))
                    * abs(mob)
                    / (2 ** (r - 1) * math.pi**r)
                )
                exact = abs(hurwitz_H(r, N))
                assert exact != 0
                rel = abs(float(exact) - analytic) / float(exact)
                assert rel < 1e-8, (r, N, rel)

    def test_H_matches_definitional_h_sum(self):
        # independent route: H(r, N) = sum_{d^2 | N} h(r, N/d^2) with
        # h(r, M) = c_r M^(r-1/2) L(r, chi_M) and chi_M the (possibly
        # imprimitive) character of discriminant M = D (f/d)^2
        for r in (3, 5):
            for N in (3, 4, 7, 12, 15, 16, 48, 75):
                fd = decompose(-N)
                l_fund = approx_L(r, fd.D, 10**6)
                total = 0.0
                for d in divisors(fd.f):
                    fprime = fd.f // d
                    euler = 1.0
                    for p, _ in _factorize(fprime):
                        euler *= 1 - kronecker(fd.D, p) / p**r
                    total += (N / d**2) ** (r - 0.5) * l_fund * euler
                analytic = math.factorial(r - 1) * total / (2 ** (r - 1) * math.pi**r)
                exact = abs(hurwitz_H(r, N))
                rel = abs(float(exact) - analytic) / float(exact)
                assert rel < 1e-8, (r, N, rel)
