import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from genkloosterman.characters import (TameDataUnavailable, ThetaChar, UnitCharacter, alpha_family,
                                       eval_theta, family_average, family_index, in_OF_U,
                                       theta_exponent, unit_coordinates)
from genkloosterman.cyclotomic import CycValue
from genkloosterman.quadratic import conj


def series_log_y(x, y, D, p, prec, terms=60):
    # sqrt(D)-coordinate of log(1 + x + y sqrt D), exact series over Q
    X, Y = Fraction(x), Fraction(y)
    PX, PY = Fraction(1), Fraction(0)
    out = Fraction(0)
    for n in range(1, terms):
        PX, PY = PX * X + D * PY * Y, PX * Y + PY * X
        out += Fraction((-1) ** (n + 1), n) * PY
    m = p**prec
    return out.numerator * pow(out.denominator, -1, m) % m


def root(f):
    f %= 1
    return CycValue.from_root(f.denominator, f.numerator)


def test_eval_examples_inert():
    th = ThetaChar.make(5, "inert", 2)
    A = th.alg
    assert eval_theta(th, A.element(1, 5)).to_json() == {"order": 5, "coeffs": [[2, 1]]}
    assert eval_theta(th, A.element(1, 25)) == CycValue.from_int(1)
    with pytest.raises(TameDataUnavailable):
        eval_theta(th, A.element(0, 1))
    assert eval_theta(th.with_tame(1), A.element(0, 1)) == CycValue.from_int(-1)


def test_eval_example_split():
    th = ThetaChar.make(5, "split", 2, tame_exp=1)
    v = eval_theta(th, th.alg.element(2, 1))
    assert v == CycValue.from_root(20, 13)
    assert abs(complex(v) - th.chi1.value(2)) < 1e-14


@pytest.mark.parametrize("kind,cond", [("inert", 2), ("inert", 3), ("ramified", 4), ("ramified", 6)])
def test_principal_units_against_series(kind, cond):
    th = ThetaChar.make(5, kind, cond, alpha0=3)
    A, p, i0 = th.alg, 5, th.i0
    rng = random.Random(cond)
    for _ in range(40):
        x, y = 5 * rng.randrange(625), rng.randrange(625)
        if kind == "inert":
            y *= 5
        Y = series_log_y(x, y, A.D, p, i0 + 1)
        want = root(Fraction(2 * 3 * Y, p**i0))
        assert eval_theta(th, A.element(1 + x, y)) == want


@pytest.mark.parametrize("kind", ["split", "inert", "ramified"])
def test_multiplicative_and_trivial_on_F(kind):
    cond = 6 if kind == "ramified" else 3
    th = ThetaChar.make(5, kind, cond, alpha0=2, tame_exp=None if kind == "ramified" else 1)
    A = th.alg
    rng = random.Random(kind)

    def rand_unit():
        while True:
            x, y = rng.randrange(1, 5**5), rng.randrange(5**5)
            z = A.element(x, y)
            if z.is_unit():
                return z

    for _ in range(40):
        z, w = rand_unit(), rand_unit()
        assert eval_theta(th, z * w) == eval_theta(th, z) * eval_theta(th, w)
    for f in (2, 3, Fraction(7, 25), 5**3):
        assert eval_theta(th, A.from_F(f)) == CycValue.from_int(1)


@pytest.mark.parametrize("kind,cond", [("split", 2), ("split", 3), ("inert", 2), ("inert", 4),
                                       ("ramified", 4), ("ramified", 6)])
def test_conductor_exact(kind, cond):
    th = ThetaChar.make(5, kind, cond)
    A = th.alg
    if kind == "ramified":
        def u(n, s, t):
            # 1 + sqrt(D)^n (s + t sqrt D)
            h, odd = divmod(n, 2)
            c = A.D**h
            if odd:
                return A.element(1 + c * A.D * t, c * s)
            return A.element(1 + c * s, c * t)
    elif kind == "split":
        def u(n, s, t):
            return A.element(1 + 5**n * s, 1 + 5**n * t)
    else:
        def u(n, s, t):
            return A.element(1 + 5**n * s, 5**n * t)
    one = CycValue.from_int(1)
    grid = list(itertools.product(range(5), repeat=2))
    assert all(eval_theta(th, u(cond, s, t)) == one for s, t in grid)
    assert any(eval_theta(th, u(cond - 1, s, t)) != one for s, t in grid)


def test_both_routes_agree():
    # psi_L(alpha log v) route versus the coordinate route
    for kind, cond in (("inert", 3), ("ramified", 4)):
        th = ThetaChar.make(5, kind, cond, alpha0=4)
        A = th.alg
        for x, y in itertools.product(range(1, 30, 4), range(0, 30, 5)):
            z = A.element(x * 5 + 1, y)
            uc = unit_coordinates(A, z, th.i0)
            assert eval_theta(th, z) == root(theta_exponent(th, uc))


@pytest.mark.parametrize("kind", ["split", "inert", "ramified"])
def test_conjugate_negates_alpha(kind):
    cond = 4 if kind == "ramified" else 2
    th = ThetaChar.make(5, kind, cond, alpha0=1, tame_exp=None if kind == "ramified" else 2)
    tc = th.conjugate()
    assert tc.alpha0 == -th.alpha0 % 5**th.i0
    A = th.alg
    for x, y in itertools.product(range(1, 12), range(0, 12, 3)):
        z = A.element(x, y)
        if not z.is_unit():
            continue
        assert eval_theta(tc, z) == eval_theta(th, conj(z))
        assert eval_theta(tc, z) == eval_theta(th, z).conjugate()


def test_family_sizes():
    inert = ThetaChar.make(5, "inert", 3, tame_exp=0)
    split = ThetaChar.make(5, "split", 3)
    ram = ThetaChar.make(5, "ramified", 6)
    assert family_index(inert, 1, 0) == 6 and family_index(split, 1, 0) == 4
    assert family_index(ram, 2, 0) == 25
    for th in (inert, split, ram):
        for n in range(th.i0):
            assert family_index(th, n, n) == 1
            for j in range(n + 1):
                fam = alpha_family(th, n, j)
                assert len(fam) == family_index(th, n, j)
                assert fam[0] == th
                assert len(set(fam)) == len(fam)
    with pytest.raises(ValueError):
        alpha_family(inert, 3, 0)


@pytest.mark.parametrize("kind,j", [("split", 1), ("split", 2), ("inert", 1), ("inert", 2),
                                    ("ramified", 1), ("ramified", 2)])
def test_family_average_is_indicator(kind, j):
    cond = 6 if kind == "ramified" else 3
    th = ThetaChar.make(5, kind, cond, alpha0=2, tame_exp=None if kind == "ramified" else 0)
    A = th.alg
    zero = CycValue.from_int(0)
    seen = set()
    for x, y in itertools.product(range(1, 26, 3), range(0, 26, 2)):
        z = A.element(x, y)
        if not z.is_unit():
            continue
        avg = family_average(th, j, z)
        inside = in_OF_U(z, A.e_L * j)
        seen.add(inside)
        assert avg == (eval_theta(th, z) if inside else zero)
    assert seen == {True, False}
    with pytest.raises(ValueError):
        family_average(th, 0, A.one())


class TestUnitCharacter:
    def test_conductor_and_multiplicativity(self):
        chi = UnitCharacter(7, 3, alpha0=2, tame_exp=1)
        for a, b in itertools.product(range(1, 60, 7), range(1, 60, 11)):
            if a % 7 and b % 7:
                assert (chi.exponent(a) + chi.exponent(b) - chi.exponent(a * b)) % 1 == 0
        assert all(chi.exponent(1 + 7**3 * s) % 1 == 0 for s in range(7))
        assert any(chi.exponent(1 + 7**2 * s) % 1 != 0 for s in range(7))

    def test_non_unit(self):
        with pytest.raises(ValueError):
            UnitCharacter(5, 2, 1).exponent(10)


@given(st.integers(1, 124), st.integers(1, 4))
@settings(max_examples=50)
def test_alpha0_is_mod_p_i0(a, t):
    if a % 5 == 0:
        return
    th = ThetaChar.make(5, "split", 3, alpha0=a, tame_exp=t)
    tt = ThetaChar.make(5, "split", 3, alpha0=a + 125, tame_exp=t + 4)
    assert th == tt


def test_validation_and_json():
    with pytest.raises(ValueError):
        ThetaChar.make(5, "inert", 1)
    with pytest.raises(ValueError):
        ThetaChar.make(5, "ramified", 5)
    with pytest.raises(ValueError):
        ThetaChar.make(5, "inert", 2, alpha0=5)
    th = ThetaChar.make(5, "inert", 2)
    assert th.to_json() == {"p": 5, "kind": "inert", "D": 2, "cond": 2, "alpha0": 1,
                            "tame_exp": None, "sign": 1}
    assert (th.i0, th.l0, th.c_pi) == (2, 1, 4)
    assert ThetaChar.make(5, "ramified", 4).c_pi == 5
