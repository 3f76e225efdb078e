"""Residue-ring arithmetic over Z_p and Q_p at finite precision.

All objects are immutable.  Precision is tracked explicitly: a
:class:`PadicScalar` knows how many unit digits are reliable and refuses to
produce digits it does not have (:class:`PrecisionError`).

>>> inv_mod(2, PrimePower(5, 2))
13
>>> padic_log(PadicScalar.of(6, 5, 6), 3).residue()
55
>>> psi_p(PadicScalar.of(Fraction(1, 5), 5, 4))
RootOfUnity(order=5, exponent=1)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "PrecisionError",
    "PrimePower",
    "PadicScalar",
    "RootOfUnity",
    "is_prime",
    "valuation",
    "inv_mod",
    "padic_log",
    "log1p_mod",
    "psi_p",
    "teichmuller",
]

MAX_BITS = 120
EXACT = 1 << 40  # absolute precision of an exact zero


class PrecisionError(ArithmeticError):
    """Raised when a result would need more digits than are known."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def valuation(x: int | Fraction, p: int) -> int:
    """v_p of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class PrimePower:
    """The modulus p**n with p a prime >= 5."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 5:
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        if self.n < 1:
            raise ValueError("precision exponent must be >= 1")
        if self.n * math.log2(self.p) > MAX_BITS:
            raise ValueError(f"{self.p}^{self.n} exceeds {MAX_BITS}-bit arithmetic")

    @property
    def modulus(self) -> int:
        return self.p**self.n


def inv_mod(a: int, pp: PrimePower | int) -> int:
    m = pp.modulus if isinstance(pp, PrimePower) else pp
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ValueError(f"{a} not invertible mod {m}") from None


@dataclass(frozen=True)
class PadicScalar:
    """p**val * unit, with ``prec`` reliable unit digits.

    A zero has ``unit == 0`` and ``val`` equal to its absolute precision,
    i.e. it stands for O(p**val).
    """

    p: int
    val: int
    unit: int
    prec: int

    # construction

    @classmethod
    def of(cls, x: int | Fraction, p: int, prec: int) -> PadicScalar:
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        PrimePower(p, prec)
        v = valuation(x, p)
        num, den = x.numerator, x.denominator
        if v > 0:
            num //= p**v
        else:
            den //= p ** (-v)
        m = p**prec
        return cls(p, v, num * pow(den, -1, m) % m, prec)

    @classmethod
    def zero(cls, p: int, absprec: int = EXACT) -> PadicScalar:
        return cls(p, absprec, 0, 0)

    # queries

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def absprec(self) -> int:
        return self.val if self.is_zero else self.val + self.prec

    def residue(self, n: int | None = None) -> int:
        """The value mod p**n as an integer; requires val >= 0."""
        n = self.absprec if n is None else n
        if n > self.absprec:
            raise PrecisionError(f"need {n} digits, have {self.absprec}")
        if self.is_zero or self.val >= n:
            return 0
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        return self.unit * self.p**self.val % self.p**n

    def to_fraction(self) -> Fraction:
        """A rational representative (exact on the known digits)."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def unit_residue(self, n: int) -> int:
        if n > self.prec:
            raise PrecisionError(f"need {n} unit digits, have {self.prec}")
        return self.unit % self.p**n

    # arithmetic

    def _coerce(self, other) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixing primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.of(other, self.p, max(self.prec, 1))
        return NotImplemented

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicScalar(self.p, self.val, -self.unit % self.p**self.prec, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        a = min(self.absprec, other.absprec)
        live = [x for x in (self, other) if not x.is_zero]
        if not live:
            return PadicScalar.zero(p, a)
        v = min(x.val for x in live)
        if v >= a:
            return PadicScalar.zero(p, a)
        m = p ** (a - v)
        s = sum(x.unit * p ** (x.val - v) for x in live) % m
        if s == 0:
            return PadicScalar.zero(p, a)
        t = 0
        while s % p == 0:
            s //= p
            t += 1
        prec = a - v - t
        return PadicScalar(p, v + t, s % p**prec, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            vs = self.val if self.is_zero else self.val
            vo = other.val
            return PadicScalar.zero(self.p, min(vs + vo, EXACT))
        prec = min(self.prec, other.prec)
        m = self.p**prec
        return PadicScalar(self.p, self.val + other.val, self.unit * other.unit % m, prec)

    __rmul__ = __mul__

    def inverse(self) -> PadicScalar:
        if self.is_zero:
            raise ZeroDivisionError("p-adic zero")
        m = self.p**self.prec
        return PadicScalar(self.p, -self.val, pow(self.unit, -1, m), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = PadicScalar.of(1, self.p, max(self.prec, 1))
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, (PadicScalar, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.p, self.val, self.unit, self.prec))

    def __repr__(self):
        if self.is_zero:
            return f"O({self.p}^{self.val})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.absprec})"


@dataclass(frozen=True)
class RootOfUnity:
    """e(exponent / order), kept in lowest terms."""

    order: int
    exponent: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        e = self.exponent % self.order
        g = math.gcd(e, self.order)
        object.__setattr__(self, "order", self.order // g)
        object.__setattr__(self, "exponent", e // g)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        n = self.order * other.order // math.gcd(self.order, other.order)
        return RootOfUnity(n, self.exponent * (n // self.order) + other.exponent * (n // other.order))

    def __pow__(self, k: int) -> RootOfUnity:
        return RootOfUnity(self.order, self.exponent * k)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity(self.order, -self.exponent)

    def __complex__(self):
        return complex(math.cos(2 * math.pi * self.exponent / self.order),
                       math.sin(2 * math.pi * self.exponent / self.order))

    @property
    def is_one(self) -> bool:
        return self.order == 1


def psi_p(x: PadicScalar) -> RootOfUnity:
    """The standard additive character e(fractional part of x)."""
    if x.is_zero:
        if x.val < 0:
            raise PrecisionError("fractional part of O(p^%d) is unknown" % x.val)
        return RootOfUnity(1, 0)
    if x.val >= 0:
        return RootOfUnity(1, 0)
    d = -x.val
    return RootOfUnity(x.p**d, x.unit_residue(d))


@lru_cache(maxsize=None)
def _log_terms(p: int, prec: int, e: int, vz: int) -> tuple[int, int]:
    """(n_max, extra) for the log series of z with v_L(z) >= vz.

    Terms with n*vz - e*v_p(n) >= e*prec vanish mod p^prec; ``extra`` is the
    largest v_p(n) among the remaining n.
    """
    n_max, extra = 0, 0
    n = 1
    while True:
        s, q = 0, n
        while q % p == 0:
            q //= p
            s += 1
        if n * vz - e * s < e * prec:
            n_max = n
            extra = max(extra, s)
        elif n * vz > e * (prec + 2 * math.log(n, p) + 2):
            break
        n += 1
    return n_max, extra


def log1p_mod(z: int, p: int, prec: int) -> int:
    """log(1 + z) mod p^prec for an integer z divisible by p."""
    if z % p:
        raise ValueError("log1p needs p | z")
    n_max, extra = _log_terms(p, prec, 1, 1)
    big = p ** (prec + extra)
    m = p**prec
    z %= big
    acc, zn = 0, 1
    for n in range(1, n_max + 1):
        zn = zn * z % big
        s, q = 0, n
        while q % p == 0:
            q //= p
            s += 1
        term = (zn // p**s) * pow(q, -1, m)
        acc += term if n % 2 else -term
    return acc % m


def padic_log(u: PadicScalar, prec: int) -> PadicScalar:
    """log(u) mod p^prec for u in U_F(1)."""
    one = PadicScalar.of(1, u.p, max(prec, 1))
    z = u - one
    if u.is_zero or u.val != 0 or (not z.is_zero and z.val < 1):
        raise ValueError("padic_log: argument not in U_F(1)")
    if z.absprec < prec:
        raise PrecisionError(f"log needs {prec} digits of u - 1, have {z.absprec}")
    r = log1p_mod(z.residue(prec), u.p, prec)
    if r == 0:
        return PadicScalar.zero(u.p, prec)
    return PadicScalar.of(r, u.p, prec) + PadicScalar.zero(u.p, prec)


def teichmuller(a: int, p: int, n: int) -> int:
    """The Teichmüller representative of a mod p^n (fixed point of x -> x^p)."""
    m = p**n
    if a % p == 0:
        return 0
    x = a % m
    while True:
        y = pow(x, p, m)
        if y == x:
            return x
        x = y
