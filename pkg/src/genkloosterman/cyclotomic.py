"""Exact elements of Z[zeta_N].

A value is stored as ``(sum_e c_e * zeta_N**e) / denom``.  :meth:`CycValue.normalize`
reduces the numerator to a canonical basis so that equality and zero tests are
exact.  For N a prime power the basis is the usual power basis
``0 <= e < phi(N)``.  For composite N the ring is the tensor product of its
prime-power pieces, and the basis is the product of their power bases: an
exponent e is kept when ``e mod q**b < phi(q**b)`` for every prime power
``q**b`` exactly dividing N.

Every value also carries a floating shadow computed from the terms it was
built from, together with a bound on its rounding error.

>>> z = CycValue.from_terms(5, range(5))
>>> z.is_zero()
True
>>> import cmath
>>> abs(complex(CycValue.from_root(25, 3)) - cmath.exp(2j * cmath.pi * 3 / 25)) < 1e-14
True
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

__all__ = ["CycValue", "cyc_normalize", "factorize"]

EPS = 2.0**-52


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            b = 0
            while n % d == 0:
                n //= d
                b += 1
            out.append((d, b))
        d += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=64)
def _crt_layout(n: int):
    """Index map from exponents mod n to the tensor grid of its prime powers."""
    parts = [q**b for q, b in factorize(n)]
    e = np.arange(n, dtype=np.int64)
    flat = np.zeros(n, dtype=np.int64)
    stride = 1
    for m in reversed(parts):
        flat += (e % m) * stride
        stride *= m
    return tuple(parts), flat


@lru_cache(maxsize=64)
def _basis_exponents(n: int) -> np.ndarray:
    """Exponent of each kept grid cell, in C order over the reduced grid."""
    parts, _ = _crt_layout(n)
    if len(parts) == 0:
        return np.zeros(1, dtype=np.int64)
    axes = []
    for (q, b), m in zip(factorize(n), parts):
        axes.append(np.arange(m - m // q, dtype=np.int64))
    grids = np.meshgrid(*axes, indexing="ij")
    e = np.zeros(grids[0].shape, dtype=np.int64)
    for g, m in zip(grids, parts):
        cof = n // m
        e = (e + g * cof * pow(cof, -1, m)) % n
    return e.ravel()


def _reduce_dense(n: int, h: np.ndarray) -> np.ndarray:
    """Canonical coordinates of a dense length-n exponent histogram."""
    if n == 1:
        return h.copy()
    parts, flat = _crt_layout(n)
    t = np.zeros(n, dtype=h.dtype)
    t[flat] = h
    t = t.reshape(parts)
    for axis, ((q, b), m) in enumerate(zip(factorize(n), parts)):
        blk = m // q
        t = np.moveaxis(t, axis, 0)
        top = t[(q - 1) * blk:]
        low = t[: (q - 1) * blk].reshape((q - 1, blk) + t.shape[1:])
        t = (low - top[None]).reshape(((q - 1) * blk,) + t.shape[1:])
        t = np.moveaxis(t, 0, axis)
    return t.ravel()


class CycValue:
    """An exact cyclotomic number with a floating shadow.

    ``note`` is free text carried along for diagnostics, e.g. the reason a sum
    is identically zero.
    """

    __slots__ = ("order", "exps", "coefs", "denom", "_s", "_e", "normalized", "note")

    def __init__(self, order, exps, coefs, denom=1, shadow=None, err=None,
                 normalized=False, note=""):
        self.order = int(order)
        self.exps = np.asarray(exps, dtype=np.int64)
        self.coefs = np.asarray(coefs, dtype=np.int64)
        self.denom = int(denom)
        # the float shadow is computed on first use unless handed in
        self._s = None if shadow is None else complex(shadow)
        self._e = None if shadow is None else float(err)
        self.normalized = normalized
        self.note = note

    @property
    def shadow(self) -> complex:
        if self._s is None:
            self._s, self._e = _shadow(self.order, self.exps, self.coefs, self.denom)
        return self._s

    @property
    def err(self) -> float:
        self.shadow
        return self._e

    def _has_shadow(self, *others) -> bool:
        return self._s is not None and all(o._s is not None for o in others)

    # construction

    @classmethod
    def zero(cls, order: int = 1, note: str = "") -> CycValue:
        return cls(order, [], [], 1, 0j, 0.0, True, note)

    @classmethod
    def from_int(cls, k: int | Fraction) -> CycValue:
        k = Fraction(k)
        if k == 0:
            return cls.zero()
        return cls(1, [0], [k.numerator], k.denominator, complex(float(k)), 0.0, True)

    @classmethod
    def from_root(cls, order: int, exponent: int) -> CycValue:
        return cls(order, [exponent % order], [1])

    @classmethod
    def from_histogram(cls, order: int, hist: np.ndarray, denom: int = 1, note="") -> CycValue:
        """Sum of hist[e] * zeta**e over a dense length-``order`` histogram."""
        hist = np.asarray(hist, dtype=np.int64)
        nz = np.flatnonzero(hist)
        return cls(order, nz, hist[nz], denom, note=note)

    @classmethod
    def from_terms(cls, order: int, exponents: Iterable[int], weights=None) -> CycValue:
        e = np.asarray(list(exponents) if not isinstance(exponents, np.ndarray) else exponents,
                       dtype=np.int64) % order
        w = np.ones(len(e), dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
        hist = np.bincount(e, weights=None if weights is None else w, minlength=order)
        return cls.from_histogram(order, np.rint(hist).astype(np.int64))

    # canonical form

    def normalize(self) -> CycValue:
        if self.normalized:
            return self
        n = self.order
        h = np.zeros(n, dtype=np.int64)
        np.add.at(h, self.exps % n, self.coefs)
        red = _reduce_dense(n, h)
        keep = np.flatnonzero(red)
        exps = _basis_exponents(n)[keep]
        coefs = red[keep]
        order = np.argsort(exps, kind="stable")
        exps, coefs = exps[order], coefs[order]
        denom = self.denom
        if len(coefs):
            g = math.gcd(int(np.gcd.reduce(np.abs(coefs))), denom)
            if g > 1:
                coefs = coefs // g
                denom //= g
        else:
            denom = 1
        return CycValue(n, exps, coefs, denom, self._s, self._e, True, self.note)

    @property
    def coeffs(self) -> dict[int, Fraction | int]:
        v = self.normalize()
        out = {}
        for e, c in zip(v.exps.tolist(), v.coefs.tolist()):
            out[e] = c if v.denom == 1 else Fraction(c, v.denom)
        return out

    def is_zero(self) -> bool:
        return len(self.normalize().coefs) == 0

    def reduced_order(self) -> CycValue:
        """The same value written over the smallest order its exponents need."""
        v = self.normalize()
        if len(v.exps) == 0:
            return CycValue.zero(note=v.note)
        g = math.gcd(v.order, *v.exps.tolist())
        if g == 1:
            return v
        return CycValue(v.order // g, v.exps // g, v.coefs, v.denom, v._s, v._e,
                        note=v.note).normalize()

    # arithmetic

    def lift(self, order: int) -> CycValue:
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        f = order // self.order
        return CycValue(order, self.exps * f, self.coefs, self.denom, self._s, self._e,
                        note=self.note)

    @staticmethod
    def _common(a: CycValue, b: CycValue):
        n = a.order * b.order // math.gcd(a.order, b.order)
        return a.lift(n), b.lift(n), n

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycValue.from_int(other)
        if not isinstance(other, CycValue):
            return NotImplemented
        a, b, n = self._common(self, other)
        d = a.denom * b.denom // math.gcd(a.denom, b.denom)
        coefs = np.concatenate([a.coefs * (d // a.denom), b.coefs * (d // b.denom)])
        exps = np.concatenate([a.exps, b.exps])
        if not a._has_shadow(b):
            return CycValue(n, exps, coefs, d)
        s = a._s + b._s
        return CycValue(n, exps, coefs, d, s, a._e + b._e + EPS * abs(s))

    __radd__ = __add__

    def __neg__(self):
        s = None if self._s is None else -self._s
        return CycValue(self.order, self.exps, -self.coefs, self.denom, s, self._e,
                        self.normalized, self.note)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CycValue):
            return NotImplemented
        a, b, n = self._common(self.normalize(), other.normalize())
        e = (a.exps[:, None] + b.exps[None, :]).ravel() % n
        c = (a.coefs[:, None] * b.coefs[None, :]).ravel()
        if not a._has_shadow(b):
            return CycValue(n, e, c, a.denom * b.denom)
        s = a._s * b._s
        err = a._e * abs(b._s) + b._e * abs(a._s) + a._e * b._e + 2 * EPS * abs(s)
        return CycValue(n, e, c, a.denom * b.denom, s, err)

    __rmul__ = __mul__

    def scale(self, k: int | Fraction) -> CycValue:
        k = Fraction(k)
        if self._s is None:
            return CycValue(self.order, self.exps, self.coefs * k.numerator,
                            self.denom * k.denominator, note=self.note)
        s = self._s * float(k)
        return CycValue(self.order, self.exps, self.coefs * k.numerator,
                        self.denom * k.denominator, s,
                        self._e * abs(float(k)) + EPS * abs(s), note=self.note)

    def conjugate(self) -> CycValue:
        s = None if self._s is None else self._s.conjugate()
        return CycValue(self.order, -self.exps % self.order, self.coefs, self.denom,
                        s, self._e, note=self.note)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycValue.from_int(other)
        if not isinstance(other, CycValue):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # floats

    def __complex__(self):
        return self.shadow

    def __abs__(self):
        return abs(self.shadow)

    def exact_float(self) -> tuple[complex, float]:
        """Float value from the canonical coordinates, with its own error bound."""
        v = self.normalize()
        return _shadow(v.order, v.exps, v.coefs, v.denom)

    def to_json(self) -> dict:
        v = self.normalize()
        coeffs = []
        for e, c in zip(v.exps.tolist(), v.coefs.tolist()):
            coeffs.append([e, c if v.denom == 1 else f"{Fraction(c, v.denom)}"])
        return {"order": v.order, "coeffs": coeffs}

    def __repr__(self):
        v = self.normalize()
        terms = len(v.coefs)
        return f"CycValue(order={v.order}, terms={terms}, ~{v.shadow:.6g})"


def _shadow(order, exps, coefs, denom):
    if len(coefs) == 0:
        return 0j, 0.0
    ang = (2 * np.pi / order) * (np.asarray(exps) % order)
    w = np.asarray(coefs, dtype=np.float64)
    s = complex(np.sum(w * np.cos(ang)), np.sum(w * np.sin(ang))) / denom
    l1 = float(np.sum(np.abs(w))) / denom
    nterms = max(len(w), 2)
    err = l1 * EPS * (8 + 2 * math.log2(nterms)) + EPS * abs(s)
    return s, err


def cyc_normalize(v: CycValue) -> CycValue:
    return v.normalize()
