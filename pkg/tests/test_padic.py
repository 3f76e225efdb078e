import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from genkloosterman.padic import (PadicScalar, PrecisionError, PrimePower, RootOfUnity, inv_mod,
                                  is_prime, log1p_mod, padic_log, psi_p, teichmuller, valuation)
from genkloosterman.verify import log_bijection


def series_log(z, p, prec, terms=80):
    # independent truncated series in exact rationals
    tot = Fraction(0)
    for n in range(1, terms):
        tot += Fraction((-1) ** (n + 1) * z**n, n)
    m = p**prec
    return tot.numerator * pow(tot.denominator, -1, m) % m


class TestPrimePower:
    def test_rejects_small_and_composite(self):
        for p in (2, 3, 4, 9, 15):
            with pytest.raises(ValueError):
                PrimePower(p, 2)

    def test_rejects_oversized(self):
        with pytest.raises(ValueError, match="120-bit"):
            PrimePower(5, 60)
        assert PrimePower(5, 51).modulus == 5**51

    def test_is_prime(self):
        assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestInvMod:
    def test_examples(self):
        assert inv_mod(1, PrimePower(5, 3)) == 1
        assert inv_mod(2, PrimePower(5, 2)) == 13

    def test_non_unit(self):
        with pytest.raises(ValueError, match="not invertible"):
            inv_mod(5, PrimePower(5, 2))

    def test_involution_exhaustive(self):
        pp = PrimePower(5, 3)
        for a in range(1, 125):
            if a % 5:
                assert inv_mod(inv_mod(a, pp), pp) == a
                assert a * inv_mod(a, pp) % 125 == 1


class TestScalar:
    def test_valuation(self):
        assert valuation(Fraction(50, 3), 5) == 2
        assert valuation(Fraction(3, 125), 5) == -3

    def test_of_and_residue(self):
        x = PadicScalar.of(Fraction(7, 25), 5, 6)
        assert (x.val, x.unit) == (-2, 7)
        assert (x * 25).residue(3) == 7

    def test_arithmetic_matches_fractions(self):
        rng = random.Random(1)
        for _ in range(200):
            a = Fraction(rng.randint(-500, 500) or 1, rng.choice([1, 5, 25, 3, 7]))
            b = Fraction(rng.randint(-500, 500) or 1, rng.choice([1, 5, 125, 11]))
            A, B = PadicScalar.of(a, 5, 10), PadicScalar.of(b, 5, 10)
            for got, want in ((A + B, a + b), (A * B, a * b), (A - B, a - b), (A / B, a / b)):
                if want == 0:
                    assert got.is_zero
                    continue
                ref = PadicScalar.of(want, 5, 10)
                assert got.val == ref.val
                n = min(got.prec, 6)
                assert got.unit % 5**n == ref.unit % 5**n

    def test_precision_loss_is_tracked(self):
        a = PadicScalar.of(1 + 5**4, 5, 5)
        b = PadicScalar.of(1, 5, 5)
        d = a - b
        assert d.val == 4 and d.prec <= 1

    def test_unknown_fraction_part_raises(self):
        with pytest.raises(PrecisionError):
            psi_p(PadicScalar.zero(5, -2))


class TestLog:
    def test_examples(self):
        assert padic_log(PadicScalar.of(1, 5, 6), 3).is_zero
        r = padic_log(PadicScalar.of(6, 5, 6), 3).residue()
        assert r == 55 == -70 % 125
        assert r == series_log(5, 5, 3)

    def test_domain(self):
        with pytest.raises(ValueError, match="U_F"):
            padic_log(PadicScalar.of(2, 5, 6), 3)
        with pytest.raises(ValueError):
            log1p_mod(1, 5, 3)

    @given(st.integers(0, 7**4 - 1), st.integers(0, 7**4 - 1))
    @settings(max_examples=200)
    def test_homomorphism_p7(self, s, t):
        p, prec = 7, 4
        u, v = 1 + p * s, 1 + p * t
        lu = padic_log(PadicScalar.of(u, p, prec + 2), prec)
        lv = padic_log(PadicScalar.of(v, p, prec + 2), prec)
        luv = padic_log(PadicScalar.of(u * v, p, prec + 2), prec)
        assert (lu + lv).residue(prec) == luv.residue(prec)
        assert luv.residue(prec) == series_log(u * v - 1, p, prec)

    @pytest.mark.parametrize("prec", [1, 2, 3, 4])
    def test_bijection_exhaustive(self, prec):
        for i in range(1, prec + 1):
            assert log_bijection(5, prec, i)


class TestPsi:
    def test_values(self):
        assert psi_p(PadicScalar.of(3, 5, 4)).is_one
        assert psi_p(PadicScalar.of(Fraction(1, 5), 5, 4)) == RootOfUnity(5, 1)
        a = psi_p(PadicScalar.of(Fraction(3, 25), 5, 4))
        b = psi_p(PadicScalar.of(Fraction(2, 25), 5, 4))
        assert a * b == psi_p(PadicScalar.of(Fraction(1, 5), 5, 4))

    @given(st.integers(-10**6, 10**6), st.integers(0, 6), st.integers(-10**6, 10**6), st.integers(0, 6))
    def test_additive(self, a, i, b, j):
        x, y = Fraction(a, 5**i), Fraction(b, 5**j)
        X, Y = PadicScalar.of(x, 5, 12), PadicScalar.of(y, 5, 12)
        s = x + y
        assert psi_p(X) * psi_p(Y) == (psi_p(PadicScalar.of(s, 5, 12)) if s else RootOfUnity(1, 0))

    def test_root_of_unity_reduces(self):
        r = RootOfUnity(25, 10)
        assert (r.order, r.exponent) == (5, 2)
        assert abs(complex(r) - complex(RootOfUnity(5, 2))) < 1e-15


def test_teichmuller():
    for a in range(1, 7):
        w = teichmuller(a, 7, 5)
        assert w % 7 == a and pow(w, 6, 7**5) == 1
