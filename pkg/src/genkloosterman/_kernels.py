"""Vectorized int64 residue arithmetic.

Every modulus used here stays below ``LIMIT`` so that the product of two
residues fits in a signed 64-bit integer.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .padic import _log_terms

LIMIT = 3_037_000_499  # floor(sqrt(2**63 - 1))
CHUNK = 1 << 15


def check_modulus(m: int) -> None:
    if m > LIMIT:
        raise ValueError(f"modulus {m} exceeds the native kernel range")


def units_array(p: int, k: int) -> np.ndarray:
    a = np.arange(p**k, dtype=np.int64)
    return a[a % p != 0]


def vec_inv(a: np.ndarray, p: int, m: int) -> np.ndarray:
    """Inverses of units mod m = p^n by Newton iteration from mod p."""
    check_modulus(m)
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(t, -1, p) for t in range(1, p)]
    a = a % m
    x = table[a % p]
    mod = p
    while mod < m:
        mod = min(mod * mod, m)
        x = x * ((2 - a * x % mod) % mod) % mod
    return x


def vec_log1p_field(X: np.ndarray, Y: np.ndarray, D: int, p: int, prec: int,
                    e: int) -> tuple[np.ndarray, np.ndarray]:
    """log(1 + X + Y sqrt D) mod p^prec, coordinatewise, for v_L(X + Y sqrt D) >= 1."""
    n_max, extra = _log_terms(p, prec, e, 1)
    big = p ** (prec + extra)
    check_modulus(big * max(abs(D), 1))
    m = p**prec
    X, Y = X % big, Y % big
    zx = np.ones_like(X)
    zy = np.zeros_like(Y)
    ax = np.zeros_like(X)
    ay = np.zeros_like(Y)
    for n in range(1, n_max + 1):
        zx, zy = (zx * X % big + D * (zy * Y % big)) % big, (zx * Y % big + zy * X % big) % big
        s, q = 0, n
        while q % p == 0:
            q //= p
            s += 1
        c = pow(q, -1, m)
        if n % 2 == 0:
            c = m - c
        ax = (ax + (zx // p**s) % m * c) % m
        ay = (ay + (zy // p**s) % m * c) % m
    return ax, ay


def vec_log_unit(x: np.ndarray, p: int, prec: int) -> np.ndarray:
    """log<x> mod p^prec for units x of Z_p, via log(x^(p-1)) / (p-1)."""
    n_max, extra = _log_terms(p, prec, 1, 1)
    big = p ** (prec + extra)
    check_modulus(big)
    y = np.ones_like(x)
    b = x % big
    e = p - 1
    while e:
        if e & 1:
            y = y * b % big
        b = b * b % big
        e >>= 1
    z = (y - 1) % big
    m = p**prec
    acc = np.zeros_like(x)
    zn = np.ones_like(x)
    for n in range(1, n_max + 1):
        zn = zn * z % big
        s, q = 0, n
        while q % p == 0:
            q //= p
            s += 1
        c = pow(q, -1, m)
        if n % 2 == 0:
            c = m - c
        acc = (acc + (zn // p**s) % m * c) % m
    return acc * pow(p - 1, -1, m) % m


def hensel_roots(coeffs: tuple[int, int, int], p: int, i: int) -> list[int]:
    """Roots mod p^i of a*x^2 + b*x + c (integers), lifted from roots mod p.

    Simple roots are lifted by a Newton step; at singular roots every lift
    is tested.
    """
    a, b, c = coeffs

    def f(x, m):
        return (a * x * x + b * x + c) % m

    roots = [r for r in range(p) if f(r, p) == 0]
    mod = p
    for _ in range(1, i):
        nxt = []
        for r in roots:
            df = (2 * a * r + b) % p
            fr = f(r, mod * p)
            if df:
                t = (-(fr // mod) * pow(df, -1, p)) % p
                nxt.append(r + mod * t)
            else:
                nxt.extend(r + mod * t for t in range(p) if f(r + mod * t, mod * p) == 0)
        roots = nxt
        mod *= p
    return sorted(roots)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("GENKL_THREADS", "1")))
    except ValueError:
        return 1


def chunked(n: int, fn, workers: int | None = None) -> list:
    """fn(start, stop) over fixed CHUNK-sized slices of range(n), in order."""
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)] or [(0, 0)]
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(bounds) == 1:
        return [fn(s, t) for s, t in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda st: fn(*st), bounds))


def histogram(exps: np.ndarray, n: int, workers: int | None = None) -> np.ndarray:
    parts = chunked(len(exps), lambda s, t: np.bincount(exps[s:t], minlength=n), workers)
    out = parts[0].astype(np.int64)
    for h in parts[1:]:
        out += h
    return out


TABLE_MAX = 1 << 21


@lru_cache(maxsize=8)
def _roots(n: int) -> tuple[np.ndarray, np.ndarray]:
    ang = np.arange(n) * (2 * np.pi / n)
    c, s = np.cos(ang), np.sin(ang)
    c.setflags(write=False)
    s.setflags(write=False)
    return c, s


def root_sum(exps: np.ndarray, n: int, workers: int | None = None) -> complex:
    """sum of e(E/n) over E in exps (0 <= E < n), reproducible for any worker count."""
    if n <= TABLE_MAX:
        c, sn = _roots(n)

        def part(s, t):
            e = exps[s:t]
            return np.array([np.sum(c[e]), np.sum(sn[e])])
    else:
        def part(s, t):
            ang = exps[s:t] * (2 * np.pi / n)
            return np.array([np.sum(np.cos(ang)), np.sum(np.sin(ang))])

    parts = np.array(chunked(len(exps), part, workers))
    tot = parts.sum(axis=0)
    return complex(tot[0], tot[1])
