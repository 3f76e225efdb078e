"""Generalized Kloosterman sums G_p(m1, m2, theta, mu).

With v(mu) = -2k, write t2 = a/p^k for units a mod p^k, and let R be
m1*m2*mu*p^(2k) mod p^k.

Field case (supercuspidal)::

    G = sum_a theta^-1(t2 + alpha) * psi(m1 m2 mu t2 / Nm(t2 + alpha) + t2)

Here ``Nm(t2 + alpha) * p^(2k) = a^2 - beta`` with
``beta = alpha0^2 p^(2(k-i0)) / D``, and theta^-1(t2 + alpha) only involves
``log(1 + w sqrt D)`` with ``w = alpha0 p^(k-i0) / (D a)``.  The value is
an exact :class:`CycValue` of order p^k.

Split case (principal series)::

    G = chi1^-1(m1 m2 mu) * sum_a chi1(t2)^2 * psi(m1 m2 mu / t2 + t2)

This case is returned as a float complex.

``depth`` i >= 1 keeps only the terms near the stationary points:
``a^2 - beta = R`` (field) or ``a^2 + 2 alpha0 p^(k-i0) a = R`` (split),
both mod p^i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .characters import ThetaChar, alpha_family, dlog_table, family_index
from .cyclotomic import CycValue
from .kloosterman import kl_local_exact
from .padic import PadicScalar, PrecisionError, valuation

__all__ = [
    "Constants",
    "GpParams",
    "constants",
    "gp",
    "gp_supercuspidal",
    "gp_principal",
    "gp_average",
    "g_global",
    "g_global_exact",
    "support_status",
    "GpStats",
]

MODES = ("brute", "stationary")


@dataclass(frozen=True)
class Constants:
    i0: int
    c_pi: int
    l0: int
    c0: int
    c_l: int
    index: int
    CF_l0: int
    CF_l: int


def constants(theta: ThetaChar, l: int) -> Constants:
    p, i0, l0 = theta.p, theta.i0, theta.l0
    if not (l0 <= l < i0):
        raise ValueError(f"need l0={l0} <= l < i0={i0}, got l={l}")
    if theta.kind == "split":
        c0, cf0 = p**i0, (p + 1) * p ** (i0 - 1)
    else:
        c0, cf0 = p ** (i0 + 1), (p + 1) * p**i0
    index = family_index(theta, l, l0)
    return Constants(i0, theta.c_pi, l0, c0, c0 * p ** (l - l0), index, cf0, cf0 * index)


def a_pi(theta: ThetaChar) -> Fraction:
    """(1 - 1/p) * C_F[l0]."""
    return (1 - Fraction(1, theta.p)) * constants(theta, theta.l0).CF_l0


@dataclass(frozen=True)
class GpParams:
    theta: ThetaChar
    m1: int
    m2: int
    mu: PadicScalar | Fraction | int
    depth: int = 0

    def mu_data(self) -> tuple[int | None, int, str]:
        """(k, unit part of mu * p^2k mod p^k, reason); k is None when v(mu) is odd."""
        p = self.theta.p
        mu = self.mu
        if isinstance(mu, PadicScalar):
            if mu.is_zero:
                raise ValueError("mu must be nonzero")
            v = mu.val
            if v % 2:
                return None, 0, "odd valuation of mu"
            k = -v // 2
            if k > 0 and mu.prec < k:
                raise PrecisionError(f"mu known to {mu.prec} digits, need {k}")
            u = mu.unit % p**k if k > 0 else 0
        else:
            mu = Fraction(mu)
            if mu == 0:
                raise ValueError("mu must be nonzero")
            v = valuation(mu, p)
            if v % 2:
                return None, 0, "odd valuation of mu"
            k = -v // 2
            if k > 0:
                x = mu * Fraction(p) ** (2 * k)
                u = x.numerator * pow(x.denominator, -1, p**k) % p**k
            else:
                u = 0
        return k, u, ""

    @property
    def k(self) -> int | None:
        return self.mu_data()[0]


@dataclass
class GpStats:
    """Bookkeeping from the last evaluation; filled when passed to gp()."""

    terms: int = 0
    mode: str = ""
    depth: int = 0


def support_status(params: GpParams) -> str:
    """'' if the sum is evaluated, else the reason it is identically 0."""
    k, _, reason = params.mu_data()
    if reason:
        return reason
    i0 = params.theta.i0
    if params.theta.kind == "split":
        return "outside support" if k < i0 else ""
    return "outside support" if k <= i0 else ""


# --- field case -------------------------------------------------------------


def _beta(theta: ThetaChar, k: int) -> int:
    p, i0, a0, D = theta.p, theta.i0, theta.alpha0, theta.alg.D
    P = p**k
    if theta.kind == "inert":
        return a0 * a0 * pow(p, 2 * (k - i0), P) * pow(D, -1, P) % P
    r = D // p
    return a0 * a0 * pow(p, 2 * (k - i0) - 1, P) * pow(r, -1, P) % P


def field_parts(theta: ThetaChar, k: int, a: np.ndarray, shift: int = 0):
    """(x, y) with term(a) = e((R*x + y) / p^k).

    x = a / (a^2 - beta) and y = a + (theta^-1 exponent) * p^(k-i0).  The
    theta part is computed on the representative a + p^k * shift.
    """
    p, i0, a0 = theta.p, theta.i0, theta.alpha0
    P = p**k
    K.check_modulus(P)
    beta = _beta(theta, k)
    den = (a * a % P - beta) % P
    x = a * K.vec_inv(den, p, P) % P
    e = theta.alg.e_L
    n_max, extra = K._log_terms(p, i0, e, 1)
    big = p ** (i0 + extra)
    rep = (a + P * shift) % big
    D = theta.alg.D
    if theta.kind == "inert":
        num = a0 * pow(p, k - i0, big) % big
        w = num * K.vec_inv(rep * (D % big) % big, p, big) % big
    else:
        num = a0 * pow(p, k - i0 - 1, big) % big
        w = num * K.vec_inv(rep * (D // p) % big, p, big) % big
    _, ly = K.vec_log1p_field(np.zeros_like(w), w, D, p, i0, e)
    m = p**i0
    th = (-2 * a0 % m) * ly % m
    y = (a + th * p ** (k - i0)) % P
    return x, y


@lru_cache(maxsize=256)
def _field_full(theta: ThetaChar, k: int, shift: int = 0):
    a = K.units_array(theta.p, k)
    x, y = field_parts(theta, k, a, shift)
    for arr in (a, x, y):
        arr.setflags(write=False)
    return a, x, y


def _stationary_a(theta: ThetaChar, k: int, R: int, i: int) -> np.ndarray:
    p = theta.p
    P = p**k
    if theta.kind == "split":
        b = 2 * theta.alpha0 * p ** (k - theta.i0)
        roots = K.hensel_roots((1, b, -R), p, i)
    else:
        roots = K.hensel_roots((1, 0, -(R + _beta(theta, k))), p, i)
    roots = [r for r in roots if r % p]
    if not roots:
        return np.zeros(0, dtype=np.int64)
    s = np.arange(p ** (k - i), dtype=np.int64) * p**i
    return (np.array(roots, dtype=np.int64)[:, None] + s[None, :]).ravel() % P


def _depth_mask(theta: ThetaChar, k: int, a: np.ndarray, R: int, i: int) -> np.ndarray:
    p = theta.p
    q = p**i
    if theta.kind == "split":
        b = 2 * theta.alpha0 * p ** (k - theta.i0) % q
        return (a % q * (a % q) + b * (a % q) - R) % q == 0
    return ((a % q) * (a % q) - _beta(theta, k) - R) % q == 0


def _resolve(params: GpParams, mode: str):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    k, u, reason = params.mu_data()
    theta = params.theta
    reason = reason or support_status(params)
    P = theta.p**k if k and k > 0 else 1
    R = params.m1 * params.m2 * u % P if not reason else 0
    i = params.depth
    if not reason and not (0 <= i <= k // 2):
        raise ValueError(f"depth must be in 0..{k // 2}, got {i}")
    return k, R, reason, i


def _field_terms(theta, k, R, i, mode, shift, cached, stats):
    """(x, y) arrays of the summation terms for the requested path."""
    p = theta.p
    if mode == "stationary" and R % p and k // 2 >= 1:
        i = i or k // 2
        x, y = field_parts(theta, k, _stationary_a(theta, k, R, i), shift)
        used = "stationary"
    else:
        if cached:
            a, x, y = _field_full(theta, k, shift)
        else:
            a = K.units_array(p, k)
            x, y = field_parts(theta, k, a, shift)
        if i:
            mask = _depth_mask(theta, k, a, R, i)
            x, y = x[mask], y[mask]
        used = "brute"
    if stats is not None:
        stats.terms, stats.mode, stats.depth = len(x), used, i
    return x, y


def _mark_zero(stats, mode, depth):
    if stats is not None:
        stats.terms, stats.mode, stats.depth = 0, mode, depth


def gp_supercuspidal(params: GpParams, mode: str = "brute", workers: int | None = None,
                     shift: int = 0, cached: bool = True, stats: GpStats | None = None) -> CycValue:
    theta = params.theta
    if theta.kind == "split":
        raise ValueError("gp_supercuspidal needs a field-case theta")
    k, R, reason, i = _resolve(params, mode)
    if reason:
        _mark_zero(stats, mode, params.depth)
        return CycValue.zero(note=reason)
    P = theta.p**k
    x, y = _field_terms(theta, k, R, i, mode, shift, cached, stats)
    e = (R * x + y) % P
    return CycValue.from_histogram(P, K.histogram(e, P, workers)).normalize()


# --- split case -------------------------------------------------------------


def _chi_exponent(theta: ThetaChar, x: np.ndarray) -> np.ndarray:
    """chi1(x) = e(E / ((p-1) p^i0)) for units x."""
    p, i0 = theta.p, theta.i0
    m = p**i0
    table = np.zeros(p, dtype=np.int64)
    for r, d in dlog_table(p).items():
        table[r] = d
    tame = theta.tame_exp * table[x % p] % (p - 1)
    wild = theta.alpha0 * K.vec_log_unit(x, p, i0) % m
    return (tame * m + wild * (p - 1)) % ((p - 1) * m)


@lru_cache(maxsize=256)
def _split_full(theta: ThetaChar, k: int):
    a = K.units_array(theta.p, k)
    c = _chi_exponent(theta, a)
    inv = K.vec_inv(a, theta.p, theta.p**k)
    for arr in (a, c, inv):
        arr.setflags(write=False)
    return a, c, inv


def _split_exponents(theta: ThetaChar, k: int, R: int, a, chi_a, inv):
    """Exponents over N = (p-1) p^k of the terms chi1(a)^2 e((R/a + a)/p^k)."""
    p, i0 = theta.p, theta.i0
    P = p**k
    add = (R * inv + a) % P
    return (2 * chi_a * p ** (k - i0) + (p - 1) * add) % ((p - 1) * P)


def _split_terms(theta, k, R, i, mode, cached, stats):
    p = theta.p
    if mode == "stationary" and R % p and k // 2 >= 1:
        i = i or k // 2
        a = _stationary_a(theta, k, R, i)
        c, inv = _chi_exponent(theta, a), K.vec_inv(a, p, p**k)
        used = "stationary"
    else:
        if cached:
            a, c, inv = _split_full(theta, k)
        else:
            a = K.units_array(p, k)
            c, inv = _chi_exponent(theta, a), K.vec_inv(a, p, p**k)
        if i:
            mask = _depth_mask(theta, k, a, R, i)
            a, c, inv = a[mask], c[mask], inv[mask]
        used = "brute"
    if stats is not None:
        stats.terms, stats.mode, stats.depth = len(a), used, i
    return _split_exponents(theta, k, R, a, c, inv)


def gp_principal(params: GpParams, mode: str = "brute", workers: int | None = None,
                 chi_p: complex | None = None, cached: bool = True, exact: bool = False,
                 stats: GpStats | None = None):
    """The split-case sum; complex by default, CycValue of order (p-1)p^k if ``exact``.

    chi1(p) is 1.  Passing ``chi_p`` evaluates with chi1(p) = chi_p instead: it
    enters as chi_p^-v(m1 m2 mu) from the prefactor and chi_p^(-2k) from chi1(t2)^2.
    """
    theta = params.theta
    if theta.kind != "split":
        raise ValueError("gp_principal needs a split theta")
    if exact and chi_p is not None:
        raise ValueError("exact evaluation fixes chi1(p) = 1")
    k, R, reason, i = _resolve(params, mode)
    if reason:
        _mark_zero(stats, mode, params.depth)
        return CycValue.zero(note=reason) if exact else 0j
    p, i0 = theta.p, theta.i0
    N = (p - 1) * p**k
    # chi1^-1(m1 m2 mu), through the unit part of m1 m2 times that of mu
    w = params.m1 * params.m2
    if w == 0:
        raise ValueError("split sum needs m1*m2 != 0")
    vw = valuation(w, p)
    w //= p**vw
    _, u, _ = params.mu_data()
    cR = int(_chi_exponent(theta, np.array([w * u % p**i0], dtype=np.int64))[0]) * p ** (k - i0)
    E = _split_terms(theta, k, R, i, mode, cached, stats)
    if exact:
        v = CycValue.from_histogram(N, K.histogram(E, N, workers))
        return (v * CycValue.from_root(N, -cR)).normalize()
    s = K.root_sum(E, N, workers)
    s *= complex(math.cos(2 * math.pi * cR / N), -math.sin(2 * math.pi * cR / N))
    if chi_p is not None:
        s = s * chi_p ** (2 * k - vw) * chi_p ** (-2 * k)
    return s


# --- dispatch ---------------------------------------------------------------


def gp(theta: ThetaChar, m1: int, m2: int, mu, depth: int = 0, mode: str = "brute",
       workers: int | None = None, **kw):
    """G_p(m1, m2, theta, mu); CycValue for field theta, complex for split."""
    params = GpParams(theta, m1, m2, mu, depth)
    kind = theta.kind
    if kind == "split":
        return gp_principal(params, mode, workers, **kw)
    if kind in ("inert", "ramified"):
        return gp_supercuspidal(params, mode, workers, **kw)
    raise ValueError(f"unknown algebra kind {kind!r}")


def gp_average(theta: ThetaChar, l: int, m1: int, m2: int, mu, workers: int | None = None):
    """Average of gp(theta', ...) over theta' in theta[l] / ~_l0."""
    const = constants(theta, l)
    fam = alpha_family(theta, l, theta.l0)
    if len(fam) != const.index:
        raise AssertionError("family size differs from the index")
    vals = [gp(t, m1, m2, mu, workers=workers) for t in fam]
    if theta.kind == "split":
        return math.fsum(v.real for v in vals) / len(fam) + 1j * math.fsum(v.imag for v in vals) / len(fam)
    tot = vals[0]
    for v in vals[1:]:
        tot = tot + v
    return tot.scale(Fraction(1, len(fam))).normalize()


def _c_factors(c: int, p: int) -> tuple[int, list[int]]:
    k = 0
    while c % p == 0:
        c //= p
        k += 1
    qs = []
    d = 2
    while d * d <= c:
        if c % d == 0:
            qs.append(d)
            while c % d == 0:
                c //= d
        d += 1
    if c > 1:
        qs.append(c)
    return k, qs


def g_global_exact(m1: int, m2: int, theta: ThetaChar, c: int, l: int | None = None) -> CycValue:
    """G(m1, m2, theta, c) exactly (field case), zero with a note if c_l does not divide c."""
    p = theta.p
    l = theta.l0 if l is None else l
    cl = constants(theta, l).c_l
    if c < 1:
        raise ValueError("c must be positive")
    if c % cl:
        return CycValue.zero(note=f"c_l={cl} does not divide c")
    if theta.kind == "split":
        raise ValueError("exact global sum is only available for field theta")
    mu = Fraction(1, c * c)
    out = gp(theta, m1, m2, mu)
    _, qs = _c_factors(c, p)
    for q in qs:
        out = out * kl_local_exact(m1, m2, mu, q)
    return out.normalize()


def g_global(m1: int, m2: int, theta: ThetaChar, c: int, l: int | None = None) -> complex:
    p = theta.p
    l = theta.l0 if l is None else l
    cl = constants(theta, l).c_l
    if c < 1:
        raise ValueError("c must be positive")
    if c % cl:
        return 0j
    mu = Fraction(1, c * c)
    if theta.kind == "split":
        out = gp(theta, m1, m2, mu)
        _, qs = _c_factors(c, p)
        for q in qs:
            out *= complex(kl_local_exact(m1, m2, mu, q))
        return out
    return complex(g_global_exact(m1, m2, theta, c, l))
