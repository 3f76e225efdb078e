"""Property suites behind ``genkl verify``.  Each returns a JSON-ready report."""
from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

from .characters import (ThetaChar, alpha_family, family_average_coords, family_index,
                         theta_exponent, unit_coordinates, in_OF_U)
from .dualsum import _unit_mu, dual_bound, gtilde_table, in_dual_support, whittaker_profile
from .genkl import constants, gp, gp_average
from .kloosterman import kl_local_exact, ramanujan
from .padic import log1p_mod

__all__ = ["SUITES", "run_suite", "unit_residues", "unit_elements"]

ENVELOPE = 8.0


def unit_residues(p: int, k: int) -> list[int]:
    return [a for a in range(1, p**k) if a % p]


def _mu(p: int, k: int) -> Fraction:
    return Fraction(1, p ** (2 * k))


def _close(a, b, tol=1e-9) -> bool:
    return abs(complex(a) - complex(b)) <= tol


def _report(suite, params, cases, t0, **extra):
    return {"suite": suite, "params": params, "passed": all(c["passed"] for c in cases),
            "n_cases": len(cases), "cases": cases, "wall_s": round(time.perf_counter() - t0, 3),
            **extra}


def suite_classical(p=5, kind="inert", cond=2, **_):
    """gp = kl_local for every unit m1 m2 mod p^k, k = c(pi), c(pi)+1."""
    t0 = time.perf_counter()
    theta = ThetaChar.make(p, kind, cond)
    cases = []
    for k in (theta.c_pi, theta.c_pi + 1):
        mu = _mu(p, k)
        bad = 0
        for R in unit_residues(p, k):
            g = gp(theta, R, 1, mu)
            ref = kl_local_exact(R, 1, mu, p)
            ok = g == ref if kind != "split" else _close(g, complex(ref))
            bad += not ok
        cases.append({"k": k, "products": len(unit_residues(p, k)), "mismatches": bad,
                      "passed": bad == 0})
    return _report("classical", {"p": p, "kind": kind, "cond": cond}, cases, t0)


def suite_average(p=5, kind="inert", cond=3, l=2, **_):
    """gp_average is 0 below k = v_p(c_l) and gp(theta) from there on."""
    t0 = time.perf_counter()
    theta = ThetaChar.make(p, kind, cond)
    const = constants(theta, l)
    thr = round(math.log(const.c_l, p))
    grid = [(m1, m2) for m1 in unit_residues(p, 2) for m2 in unit_residues(p, 2)]
    cases = []
    for k in range(theta.i0 + 1, theta.i0 + l + 2):
        mu = _mu(p, k)
        memo = {}
        bad = 0
        for m1, m2 in grid:
            R = m1 * m2 % p**k
            if R not in memo:
                memo[R] = _average_check(theta, l, R, mu, k >= thr)
            bad += not memo[R]
        cases.append({"k": k, "expect": "gp" if k >= thr else "zero", "pairs": len(grid),
                      "mismatches": bad, "passed": bad == 0})
    return _report("average", {"p": p, "kind": kind, "cond": cond, "l": l}, cases, t0,
                   threshold=thr)


def _average_check(theta, l, R, mu, expect_gp) -> bool:
    avg = gp_average(theta, l, R, 1, mu)
    if theta.kind == "split":
        return _close(avg, gp(theta, R, 1, mu) if expect_gp else 0)
    return avg == gp(theta, R, 1, mu) if expect_gp else avg.is_zero()


def suite_cancellation(p=5, kind="inert", cond=2, kmax=None, **_):
    """max |gp| / p^(k/2) over all unit m1 m2 mod p^k."""
    t0 = time.perf_counter()
    theta = ThetaChar.make(p, kind, cond)
    lo = theta.i0 + (0 if kind == "split" else 1)
    hi = kmax or theta.i0 + 3
    cases = []
    for k in range(lo, hi + 1):
        mu = _mu(p, k)
        worst = max(abs(complex(gp(theta, R, 1, mu))) for R in unit_residues(p, k)) / p ** (k / 2)
        cases.append({"k": k, "max_ratio": round(worst, 6), "passed": worst <= ENVELOPE})
    return _report("cancellation", {"p": p, "kind": kind, "cond": cond}, cases, t0,
                   envelope=ENVELOPE)


def suite_dualsum(p=5, kind="inert", cond=2, k=None, **_):
    """Support law, envelope and k >= c(pi) Ramanujan degeneration of gtilde."""
    t0 = time.perf_counter()
    theta = ThetaChar.make(p, kind, cond)
    ks = [k] if k else [theta.i0 + 1, theta.c_pi]
    cases = []
    for kk in ks:
        cases.extend(dual_cases(theta, kk))
    return _report("dualsum", {"p": p, "kind": kind, "cond": cond}, cases, t0)


def dual_cases(theta: ThetaChar, k: int, m2: int = 1) -> list[dict]:
    """All unit (m1, ell) mod p^k; the support law uses the scalar predicate's congruence."""
    p = theta.p
    mu = _mu(p, k)
    prof = whittaker_profile(theta, m2, mu)
    table = gtilde_table(prof)
    P, Q = p**k, p ** (2 * k)
    units = np.array(unit_residues(p, k), dtype=np.int64)
    _, u = _unit_mu(theta, mu)
    m1, ell = np.meshgrid(units, units, indexing="ij")
    g = table[ell * m1 % P]
    need = p ** max(2 * k - theta.c_pi, 0)
    on = (m2 * u + ell * m1) % Q % need == 0
    # spot check against the scalar predicate
    for i in range(0, len(units), max(1, len(units) // 7)):
        for j in range(0, len(units), max(1, len(units) // 7)):
            if bool(on[i, j]) != in_dual_support(theta, int(units[i]), m2, int(units[j]), mu):
                raise AssertionError("support predicate mismatch")
    off_abs = np.abs(g[~on])
    off_bad = int(np.sum(off_abs >= 1e-8))
    on_ratio = float(np.max(np.abs(g[on]), initial=0.0)) / dual_bound(theta, k)
    out = [
        {"k": k, "check": "support", "off_support_max": float(np.max(off_abs, initial=0.0)),
         "violations": off_bad, "passed": off_bad == 0},
        {"k": k, "check": "envelope", "max_ratio": round(on_ratio, 6), "passed": on_ratio <= ENVELOPE},
    ]
    if k >= theta.c_pi:
        ram = np.array([ramanujan(int(n), P) for n in range(P)]) / (1 - 1 / p)
        err = float(np.max(np.abs(g - ram[(m2 + ell * m1) % P])))
        out.append({"k": k, "check": "ramanujan", "max_error": err, "passed": err <= 1e-9})
    return out


def unit_elements(theta: ThetaChar):
    """Representatives of O_L^x / U_L(c(theta)) as QuadElements."""
    alg, p = theta.alg, theta.p
    n = theta.i0
    q = p**n
    if alg.kind == "split":
        us = unit_residues(p, n)
        for a in us:
            for b in us:
                yield alg.element(a, b)
    elif alg.kind == "inert":
        for x in range(q):
            for y in range(q):
                if x % p or y % p:
                    yield alg.element(x, y)
    else:
        # U_L(2 i0) = 1 + p^i0 O_L: x mod p^i0 (unit), y mod p^i0
        for x in range(q):
            if x % p:
                for y in range(q):
                    yield alg.element(x, y)


def orthogonality_cases(theta: ThetaChar, j: int) -> dict:
    fam = alpha_family(theta, j, 0)
    on = off = bad = 0
    for x in unit_elements(theta):
        uc = unit_coordinates(theta.alg, x, theta.i0)
        avg = family_average_coords(fam, uc)
        if in_OF_U(x, theta.alg.e_L * j):
            ok = avg == family_average_coords([fam[0]], uc)
            on += 1
        else:
            ok = avg.is_zero()
            off += 1
        bad += not ok
    return {"kind": theta.kind, "j": j, "family": len(fam), "on": on, "off": off,
            "mismatches": bad, "passed": bad == 0}


def suite_orthogonality(p=5, kind="inert", cond=None, j=None, **_):
    t0 = time.perf_counter()
    kinds = [kind] if kind else ["split", "inert", "ramified"]
    cases = []
    for kd in kinds:
        e = 2 if kd == "ramified" else 1
        theta = ThetaChar.make(p, kd, cond or 3 * e, tame_exp=0)
        for jj in ([j] if j else [1, 2]):
            cases.append(orthogonality_cases(theta, jj))
    return _report("orthogonality", {"p": p, "kinds": kinds}, cases, t0)


def log_bijection(p: int, prec: int, i: int) -> bool:
    """log maps U_F(i) mod p^prec onto p^i Z_p mod p^prec, bijectively."""
    m = p**prec
    src = [1 + p**i * s for s in range(p ** (prec - i))]
    img = {log1p_mod(u - 1, p, prec) for u in src}
    return img == {p**i * s % m for s in range(p ** (prec - i))}


def family_inequivalent(fam: list[ThetaChar], j: int) -> bool:
    """Every pair differs on U_L(e_L j) (j >= 1) or on O_L^x (j = 0)."""
    theta = fam[0]
    alg = theta.alg
    e = alg.e_L
    probes = []
    for x in unit_elements(theta):
        if j == 0 or x.in_U(e * j):
            probes.append(unit_coordinates(alg, x, theta.i0))
    sigs = set()
    for t in fam:
        sigs.add(tuple(theta_exponent(t, uc) % 1 for uc in probes))
    return len(sigs) == len(fam)


def suite_bijection(p=5, kind=None, cond=None, **_):
    t0 = time.perf_counter()
    cases = []
    for prec in range(1, 5):
        for i in range(1, prec + 1):
            cases.append({"check": "log", "p": p, "prec": prec, "i": i,
                          "passed": log_bijection(p, prec, i)})
    for kd in ([kind] if kind else ["split", "inert", "ramified"]):
        e = 2 if kd == "ramified" else 1
        theta = ThetaChar.make(p, kd, cond or 3 * e, tame_exp=0)
        for n in range(theta.i0):
            for jj in range(n + 1):
                fam = alpha_family(theta, n, jj)
                idx = family_index(theta, n, jj)
                ok = len(fam) == idx and family_inequivalent(fam, jj)
                cases.append({"check": "family", "kind": kd, "n": n, "j": jj, "size": len(fam),
                              "index": idx, "passed": ok})
    return _report("bijection", {"p": p}, cases, t0)


SUITES = {
    "cancellation": suite_cancellation,
    "average": suite_average,
    "classical": suite_classical,
    "dualsum": suite_dualsum,
    "bijection": suite_bijection,
    "orthogonality": suite_orthogonality,
}


def run_suite(name: str, **params) -> dict:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**{k: v for k, v in params.items() if v is not None})
