"""Dual sums obtained from G_p by finite Fourier inversion in m1.

With P = p^k the profile is

    F(u) = P^-1 * sum_{m mod P} gp(m, m2, theta, mu) e(m u / P)

and the dual sum is

    gtilde(m1, ell) = (1 - 1/p)^-1 * sum_{u unit} F(u) e(-ell m1 u^-1 / P).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import ThetaChar
from .genkl import GpParams, gp
from .kloosterman import units_mod
from .padic import valuation

__all__ = ["WhittakerProfile", "whittaker_profile", "gtilde", "gtilde_table", "in_dual_support",
           "dual_bound"]


@dataclass(frozen=True)
class WhittakerProfile:
    theta: ThetaChar
    m2: int
    mu: Fraction
    k: int
    gp_values: np.ndarray = field(repr=False)  # gp(m, ...) for m = 0..P-1
    values: np.ndarray = field(repr=False)  # F(u) for u = 0..P-1

    @property
    def P(self) -> int:
        return self.theta.p**self.k

    def on_units(self) -> dict[int, complex]:
        a, _ = units_mod(self.P)
        return {int(u): complex(self.values[u]) for u in a}

    def forward(self, m1: int) -> complex:
        """sum over units u of F(u) e(-m1 u / P); reproduces gp(m1, ...)."""
        a, _ = units_mod(self.P)
        ph = np.exp(-2j * np.pi * (m1 * a % self.P) / self.P)
        return complex(np.sum(self.values[a] * ph))


def whittaker_profile(theta: ThetaChar, m2: int, mu) -> WhittakerProfile:
    mu = Fraction(mu)
    k, u, reason = GpParams(theta, 1, m2, mu).mu_data()
    if reason or k <= theta.i0:
        raise ValueError("profile undefined in this range (need v(mu) = -2k with k > i0)")
    P = theta.p**k
    g = np.array([complex(gp(theta, m, m2, mu)) for m in range(P)])
    if not np.any(np.abs(g) > 1e-9):
        raise ValueError("gp vanishes on the whole slice; profile is degenerate")
    F = np.fft.ifft(g)  # (1/P) sum_m g[m] e(m u / P)
    return WhittakerProfile(theta, m2, mu, k, g, F)


def gtilde(theta: ThetaChar, m1: int, m2: int, ell: int, mu,
           profile: WhittakerProfile | None = None) -> complex:
    p = theta.p
    if ell % p == 0:
        raise ValueError("ell must be coprime to p")
    if profile is None:
        profile = whittaker_profile(theta, m2, mu)
    elif profile.m2 != m2 or profile.theta != theta or profile.mu != Fraction(mu):
        raise ValueError("profile built for other parameters")
    P = profile.P
    a, inv = units_mod(P)
    ph = np.exp(-2j * np.pi * (ell * m1 % P * inv % P) / P)
    return complex(np.sum(profile.values[a] * ph)) / (1 - 1 / p)


def gtilde_table(profile: WhittakerProfile) -> np.ndarray:
    """gtilde as a function of n = ell * m1 mod P; entry n for n = 0..P-1."""
    P, p = profile.P, profile.theta.p
    a, inv = units_mod(P)
    n = np.arange(P, dtype=np.int64)
    out = np.empty(P, dtype=complex)
    for lo in range(0, P, 1024):
        blk = n[lo:lo + 1024, None] * inv[None, :] % P
        out[lo:lo + 1024] = np.exp(-2j * np.pi * blk / P) @ profile.values[a]
    return out / (1 - 1 / p)


def _unit_mu(theta: ThetaChar, mu) -> tuple[int, int]:
    """(k, unit part of mu p^2k mod p^2k)."""
    k, _, reason = GpParams(theta, 1, 1, mu).mu_data()
    if reason:
        raise ValueError(reason)
    x = Fraction(mu) * theta.p ** (2 * k)
    m = theta.p ** (2 * k)
    return k, x.numerator * pow(x.denominator, -1, m) % m


def in_dual_support(theta: ThetaChar, m1: int, m2: int, ell: int, mu) -> bool:
    """v_p(m2 u + ell m1) >= 2k - c(pi), with u the unit part of mu p^2k."""
    k, u = _unit_mu(theta, mu)
    n = (m2 * u + ell * m1) % theta.p ** (2 * k)
    if n == 0:
        return True
    return valuation(n, theta.p) >= 2 * k - theta.c_pi


def dual_bound(theta: ThetaChar, k: int) -> float:
    """p^((3k - c(pi)) / 2)."""
    return theta.p ** ((3 * k - theta.c_pi) / 2)
