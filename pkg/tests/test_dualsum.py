import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from genkloosterman.characters import ThetaChar
from genkloosterman.dualsum import (dual_bound, gtilde, gtilde_table, in_dual_support,
                                    whittaker_profile)
from genkloosterman.genkl import gp

INERT = ThetaChar.make(5, "inert", 2)
RAMIFIED = ThetaChar.make(5, "ramified", 4)
MU3 = Fraction(1, 5**6)


@pytest.fixture(scope="module", params=[INERT, RAMIFIED], ids=["inert", "ramified"])
def profile(request):
    return whittaker_profile(request.param, 1, MU3)


def naive_profile(theta, m2, mu, P):
    g = [complex(gp(theta, m, m2, mu)) for m in range(P)]
    return [sum(g[m] * cmath.exp(2j * math.pi * m * u / P) for m in range(P)) / P for u in range(P)]


def test_profile_matches_naive_dft(profile):
    P = profile.P
    ref = naive_profile(profile.theta, 1, MU3, P)
    assert np.max(np.abs(profile.values - np.array(ref))) < 1e-9


def test_round_trip(profile):
    # F lives on units, so summing over units alone recovers every gp(m1, ...)
    for m1 in range(profile.P):
        assert abs(profile.forward(m1) - profile.gp_values[m1]) < 1e-9
    nonunit = [u for u in range(profile.P) if u % 5 == 0]
    assert np.max(np.abs(profile.values[nonunit])) < 1e-9
    assert set(profile.on_units()) == {u for u in range(profile.P) if u % 5}


def test_parseval(profile):
    lhs = np.sum(np.abs(profile.values) ** 2)
    rhs = np.sum(np.abs(profile.gp_values) ** 2) / profile.P
    assert abs(lhs - rhs) < 1e-8 * rhs


def test_gtilde_direct(profile):
    # the e(-ell m1 u^-1 / P) sum written out by hand
    th, P = profile.theta, profile.P
    F = profile.on_units()
    for m1, ell in ((1, 1), (2, 3), (7, 4), (24, 11)):
        want = sum(v * cmath.exp(-2j * math.pi * ell * m1 * pow(u, -1, P) / P) for u, v in F.items())
        want /= 1 - 1 / 5
        assert abs(gtilde(th, m1, 1, ell, MU3, profile) - want) < 1e-9


def test_table_matches_direct(profile):
    th, P = profile.theta, profile.P
    tab = gtilde_table(profile)
    for m1 in range(1, P, 7):
        if m1 % 5 == 0:
            continue
        for ell in (1, 2, 9):
            assert abs(tab[ell * m1 % P] - gtilde(th, m1, 1, ell, MU3, profile)) < 1e-9


def test_depends_on_product(profile):
    th, P = profile.theta, profile.P
    a = gtilde(th, 3, 1, 4, MU3, profile)
    b = gtilde(th, 12, 1, 1, MU3, profile)
    c = gtilde(th, 3 * 4 + P, 1, 1, MU3, profile)
    assert abs(a - b) < 1e-9 and abs(a - c) < 1e-9


def test_linearity_in_slice():
    # the profile is linear in the gp slice: ifft of a sum
    p1 = whittaker_profile(INERT, 1, MU3)
    p2 = whittaker_profile(INERT, 2, MU3)
    both = np.fft.ifft(p1.gp_values + 3 * p2.gp_values)
    assert np.max(np.abs(both - (p1.values + 3 * p2.values))) < 1e-12


def test_support_and_bound_k3():
    prof = whittaker_profile(INERT, 1, MU3)
    P = prof.P
    tab = gtilde_table(prof)
    bound = dual_bound(INERT, 3)
    for m1 in range(1, P):
        if m1 % 5 == 0:
            continue
        inside = in_dual_support(INERT, m1, 1, 1, MU3)
        if not inside:
            assert abs(tab[m1]) < 1e-8
        else:
            assert abs(tab[m1]) <= 8 * bound


def test_profile_errors():
    with pytest.raises(ValueError, match="need"):
        whittaker_profile(INERT, 1, Fraction(1, 5**4))
    with pytest.raises(ValueError):
        whittaker_profile(INERT, 1, Fraction(1, 5**5))
    prof = whittaker_profile(INERT, 1, MU3)
    with pytest.raises(ValueError, match="other parameters"):
        gtilde(INERT, 1, 2, 1, MU3, prof)
    with pytest.raises(ValueError, match="coprime"):
        gtilde(INERT, 1, 1, 5, MU3, prof)
    with pytest.raises(ValueError):
        in_dual_support(INERT, 1, 1, 1, Fraction(1, 5**5))


def test_bound_formula():
    assert dual_bound(INERT, 4) == 5 ** ((12 - 4) / 2)
    assert dual_bound(RAMIFIED, 3) == 5 ** ((9 - 5) / 2)
