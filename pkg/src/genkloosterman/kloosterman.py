"""Classical Kloosterman, Ramanujan and Gauss sums.

Each sum has an exact form returning :class:`CycValue` and a float form.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .characters import UnitCharacter
from .cyclotomic import CycValue, factorize
from .padic import valuation

__all__ = [
    "kl_local",
    "kl_local_exact",
    "kl_global",
    "kl_global_exact",
    "ramanujan",
    "ramanujan_exact",
    "gauss_sum",
    "GaussSum",
    "crt_inverse",
    "units_mod",
]


@lru_cache(maxsize=32)
def units_mod(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Units mod n and their inverses, as int64 arrays."""
    a = np.array([x for x in range(n) if math.gcd(x, n) == 1], dtype=np.int64)
    inv = np.array([pow(int(x), -1, n) for x in a], dtype=np.int64) if n > 1 else np.zeros(1, np.int64)
    a.setflags(write=False)
    inv.setflags(write=False)
    return a, inv


def _kl_exact(m1: int, m2: int, c: int) -> CycValue:
    """sum over x in (Z/c)^x of e((m1 x + m2 x^-1)/c).

    c = 1 gives 1 (the single class of Z/1).
    """
    if c == 1:
        return CycValue.from_int(1)
    a, inv = units_mod(c)
    e = (m1 % c * a + m2 % c * inv) % c
    return CycValue.from_histogram(c, np.bincount(e, minlength=c))


def _mu_split(mu, q: int):
    """(j, unit part of mu * q^2j) or (None, reason) outside support."""
    mu = Fraction(mu)
    if mu == 0:
        raise ValueError("mu must be nonzero")
    v = valuation(mu, q)
    if v > 0 or v % 2:
        return None, "outside support"
    j = -v // 2
    x = mu * q ** (2 * j)
    qj = q**j
    u = x.numerator * pow(x.denominator, -1, qj) % qj if j else 0
    return j, u


def kl_local_exact(m1: int, m2: int, mu, q: int) -> CycValue:
    """KL_q(m1, m2, mu) = sum over units a mod q^j of e((m1 a + m2 u a^-1)/q^j).

    Here v_q(mu) = -2j and u is the unit part of mu q^(2j).
    """
    j, u = _mu_split(mu, q)
    if j is None:
        return CycValue.zero(note=u)
    if j == 0:
        return CycValue.from_int(1)
    return _kl_exact(m1, m2 * u, q**j)


def kl_local(m1: int, m2: int, mu, q: int) -> complex:
    return complex(kl_local_exact(m1, m2, mu, q))


def crt_inverse(a1: int, a2: int, n1: int, n2: int) -> int:
    """The inverse of a1*n2 + a2*n1 mod n1*n2."""
    if math.gcd(n1, n2) != 1:
        raise ValueError("moduli not coprime")
    if math.gcd(a1, n1) != 1 or math.gcd(a2, n2) != 1:
        raise ValueError("a_i must be units mod n_i")
    n = n1 * n2
    b2 = pow(n2, -1, n1)
    b1 = pow(n1, -1, n2)
    r = (pow(a1, -1, n1) * b2 * b2 * n2 + pow(a2, -1, n2) * b1 * b1 * n1) % n
    if n > 1 and r * (a1 * n2 + a2 * n1) % n != 1:
        raise AssertionError("CRT inverse identity failed")
    return r


def kl_global_exact(m1: int, m2: int, c: int, validate: bool = False) -> CycValue:
    if c < 1:
        raise ValueError("modulus must be positive")
    s = _kl_exact(m1, m2, c)
    if validate:
        prod = CycValue.from_int(1)
        for q, b in factorize(c):
            qb = q**b
            inv = pow(c // qb, -1, qb)
            prod = prod * _kl_exact(m1 * inv, m2 * inv, qb)
        if not prod == s:
            raise AssertionError(f"CRT factorization of S({m1},{m2};{c}) failed")
    return s


def kl_global(m1: int, m2: int, c: int, validate: bool = False) -> complex:
    return complex(kl_global_exact(m1, m2, c, validate))


def ramanujan_exact(a: int, q: int) -> CycValue:
    """c_q(a) = sum over units x mod q of e(a x / q)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    if q == 1:
        return CycValue.from_int(1)
    x, _ = units_mod(q)
    return CycValue.from_histogram(q, np.bincount(a % q * x % q, minlength=q))


def ramanujan(a: int, q: int) -> complex:
    return complex(ramanujan_exact(a, q))


class GaussSum(NamedTuple):
    value: complex
    conductor: int
    modulus: int
    mismatch: bool

    def __complex__(self):
        return complex(self.value)


def _char_conductor(chi: UnitCharacter) -> int:
    if chi.alpha0 % chi.p:
        return chi.cond
    return 1 if chi.tame_exp % (chi.p - 1) else 0


def gauss_sum(chi: UnitCharacter, n: int) -> GaussSum:
    """sum over units x mod p^n of chi(x) e(x / p^n)."""
    p = chi.p
    q = p**n
    x, _ = units_mod(q)
    vals = np.array([chi.value(int(t)) for t in x])
    phase = np.exp(2j * np.pi * x / q)
    value = complex(np.sum(vals * phase))
    c = _char_conductor(chi)
    return GaussSum(value, c, n, c != n and not (c == 0 and n == 1))
