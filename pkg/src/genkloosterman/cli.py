"""``genkl`` command line: tables, verification suites, benchmarks, dual sums, trace sides."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

from .characters import TameDataUnavailable, ThetaChar
from .cyclotomic import CycValue
from .dualsum import dual_bound, gtilde, in_dual_support, whittaker_profile
from .genkl import GpStats, gp
from .padic import PrecisionError, is_prime
from .trace import SchemaError, geometric_side, load_spectral, petersson_residual
from .verify import SUITES, run_suite, unit_residues

DOMAIN_ERRORS = (ValueError, ArithmeticError, PrecisionError, TameDataUnavailable, SchemaError,
                 OSError)

GP_COLUMNS = ["p", "kind", "D", "cond", "m1", "m2", "k", "depth", "re", "im", "abs",
              "abs_over_sqrt", "mode", "wall_ns"]


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _theta_args(sp, cond_default=None):
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--kind", choices=["split", "inert", "ramified"], required=True)
    sp.add_argument("--D", type=int, default=None, help="discriminant representative")
    sp.add_argument("--cond", type=int, required=cond_default is None, default=cond_default)
    sp.add_argument("--alpha0", type=int, default=1)
    sp.add_argument("--tame", type=int, default=None, help="tame exponent of theta")


def _threads(sp):
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: $GENKL_THREADS or 1)")


def _make_theta(a) -> ThetaChar:
    tame = a.tame
    if tame is None and a.kind == "split":
        tame = 0
    return ThetaChar.make(a.p, a.kind, a.cond, alpha0=a.alpha0, tame_exp=tame, D=a.D)


def _cplx(v) -> complex:
    return complex(v)


def _fmt(x: float) -> str:
    return repr(float(x))


# --- gp ---------------------------------------------------------------------


def _gp_row(theta, m1, m2, k, depth, mode, workers):
    stats = GpStats()
    t0 = time.perf_counter_ns()
    v = gp(theta, m1, m2, Fraction(1, theta.p ** (2 * k)), depth=depth, mode=mode,
           workers=workers, stats=stats)
    wall = time.perf_counter_ns() - t0
    z = _cplx(v)
    row = {"p": theta.p, "kind": theta.kind, "D": theta.alg.D if theta.alg.D is not None else "",
           "cond": theta.cond, "m1": m1, "m2": m2, "k": k, "depth": stats.depth,
           "re": z.real, "im": z.imag, "abs": abs(z), "abs_over_sqrt": abs(z) / theta.p ** (k / 2),
           "mode": stats.mode or mode, "wall_ns": wall}
    if isinstance(v, CycValue):
        row["exact"] = v.to_json()
    return row


def cmd_gp(a) -> int:
    theta = _make_theta(a)
    if a.grid_units:
        m1s = unit_residues(theta.p, a.k)
    else:
        m1s = [a.m1]
    rows = [_gp_row(theta, m1, a.m2, a.k, a.depth, a.mode, a.threads) for m1 in m1s]
    if a.format == "json":
        json.dump(rows if a.grid_units else rows[0], sys.stdout)
        sys.stdout.write("\n")
    else:
        w = csv.DictWriter(sys.stdout, GP_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: (_fmt(r[c]) if isinstance(r[c], float) else r[c]) for c in GP_COLUMNS})
    return 0


# --- verify -----------------------------------------------------------------


def cmd_verify(a) -> int:
    params = {"p": a.p, "kind": a.kind, "cond": a.cond, "l": a.l, "k": a.k, "j": a.j}
    report = run_suite(a.suite, **params)
    json.dump(report, sys.stdout, default=str)
    sys.stdout.write("\n")
    return 0 if report["passed"] else 1


# --- bench ------------------------------------------------------------------


def _timed(fn, repeat):
    best, out = None, None
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        out = fn()
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return out, best


def bench(theta, m1, m2, k, repeat=3, workers=None) -> dict:
    """Times both paths; equality is exact (split values compared as CycValues)."""
    mu = Fraction(1, theta.p ** (2 * k))
    sb, sf = GpStats(), GpStats()
    vb, tb = _timed(lambda: gp(theta, m1, m2, mu, mode="brute", cached=False, workers=workers,
                               stats=sb), repeat)
    vf, tf = _timed(lambda: gp(theta, m1, m2, mu, mode="stationary", cached=False,
                               workers=workers, stats=sf), repeat)
    if theta.kind == "split":
        same = gp(theta, m1, m2, mu, mode="brute", exact=True) == \
            gp(theta, m1, m2, mu, mode="stationary", exact=True)
    else:
        same = vb == vf
    return {"mode": sf.mode, "terms_evaluated": sf.terms, "wall_ns": tf,
            "speedup_vs_brute": tb / max(tf, 1), "values_equal": bool(same),
            "brute": {"terms_evaluated": sb.terms, "wall_ns": tb},
            "p": theta.p, "kind": theta.kind, "cond": theta.cond, "k": k, "m1": m1, "m2": m2}


def float_bits(theta, m1, m2, k, workers) -> str:
    v = complex(gp(theta, m1, m2, Fraction(1, theta.p ** (2 * k)), workers=workers))
    return v.real.hex() + "," + v.imag.hex()


def cmd_bench(a) -> int:
    theta = _make_theta(a)
    rep = bench(theta, a.m1, a.m2, a.k, a.repeat, a.threads)
    if a.check_threads:
        counts = [int(t) for t in a.check_threads.split(",")]
        bits = {t: float_bits(theta, a.m1, a.m2, a.k, t) for t in counts}
        rep["float_bits"] = bits
        rep["threads_bit_identical"] = len(set(bits.values())) == 1
    json.dump(rep, sys.stdout)
    sys.stdout.write("\n")
    return 0


# --- dualsum ----------------------------------------------------------------


def cmd_dualsum(a) -> int:
    theta = _make_theta(a)
    p, k = theta.p, a.k
    if a.ell % p == 0:
        raise ValueError("ell must be coprime to p")
    mu = Fraction(1, p ** (2 * k))
    prof = whittaker_profile(theta, a.m2, mu)
    bound = dual_bound(theta, k)
    m1s = unit_residues(p, k) if a.grid else [a.m1]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m1", "in_support", "re", "im", "abs", "bound_ratio"])
    for m1 in m1s:
        g = gtilde(theta, m1, a.m2, a.ell, mu, prof)
        sup = in_dual_support(theta, m1, a.m2, a.ell, mu)
        w.writerow([m1, str(sup).lower(), _fmt(g.real), _fmt(g.imag), _fmt(abs(g)),
                    _fmt(abs(g) / bound)])
    return 0


# --- trace ------------------------------------------------------------------


def cmd_trace(a) -> int:
    theta = _make_theta(a)
    if a.what == "geometric":
        side = geometric_side(theta, a.l, a.m1, a.m2, a.kappa, a.cmax)
        if a.csv:
            w = csv.writer(sys.stdout, lineterminator="\n")
            w.writerow(["c", "g_re", "g_im", "bessel", "contrib_re", "contrib_im"])
            for t in side.to_json()["terms"]:
                w.writerow([t["c"], t["g_re"], t["g_im"], t["bessel"], t["contrib_re"], t["contrib_im"]])
        else:
            json.dump(side.to_json(), sys.stdout)
            sys.stdout.write("\n")
        return 0
    if not a.data:
        raise _Usage("trace residual needs --data")
    ds = load_spectral(a.data)
    res = petersson_residual(ds, theta, a.l, a.m1, a.m2, a.kappa, a.cmax, a.gauge)
    out = {"lhs": res["lhs"], "rhs_re": res["rhs"].real, "rhs_im": res["rhs"].imag,
           "residual_abs": abs(res["residual"]),
           "tail_bound": res["tail_bound"] if math.isfinite(res["tail_bound"]) else None,
           "within_tail": abs(res["residual"]) <= res["tail_bound"] + 1e-9}
    json.dump(out, sys.stdout)
    sys.stdout.write("\n")
    return 0


class _Usage(Exception):
    pass


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="genkl", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gp", help="evaluate local generalized Kloosterman sums")
    _theta_args(g)
    g.add_argument("--m1", type=int, default=1)
    g.add_argument("--m2", type=int, default=1)
    g.add_argument("--k", type=int, required=True, help="mu = p^(-2k)")
    g.add_argument("--depth", type=int, default=0)
    g.add_argument("--mode", choices=["brute", "stationary"], default="brute")
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.add_argument("--grid-units", action="store_true", help="all unit m1 mod p^k")
    _threads(g)
    g.set_defaults(func=cmd_gp)

    v = sub.add_parser("verify", help="run a property suite, JSON report")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--p", type=_prime, default=None)
    v.add_argument("--kind", choices=["split", "inert", "ramified"], default=None)
    v.add_argument("--cond", type=int, default=None)
    v.add_argument("--l", type=int, default=None)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--j", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="stationary path against brute force")
    _theta_args(b)
    b.add_argument("--m1", type=int, default=1)
    b.add_argument("--m2", type=int, default=1)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("--check-threads", default=None, metavar="N,M",
                   help="compare float bits across these thread counts")
    _threads(b)
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("dualsum", help="dual sums gtilde as CSV")
    _theta_args(d)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--m2", type=int, default=1)
    d.add_argument("--m1", type=int, default=1)
    d.add_argument("--ell", type=int, default=1)
    d.add_argument("--grid", action="store_true", help="all unit m1 mod p^k")
    d.set_defaults(func=cmd_dualsum)

    t = sub.add_parser("trace", help="geometric side or spectral residual")
    t.add_argument("what", choices=["geometric", "residual"])
    _theta_args(t)
    t.add_argument("--l", type=int, required=True)
    t.add_argument("--m1", type=int, default=1)
    t.add_argument("--m2", type=int, default=1)
    t.add_argument("--kappa", type=int, required=True)
    t.add_argument("--cmax", type=int, required=True)
    t.add_argument("--data", default=None)
    t.add_argument("--gauge", type=float, default=1.0)
    fmt = t.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    t.set_defaults(func=cmd_trace)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except _Usage as exc:
        ap.print_usage(sys.stderr)
        print(f"genkl: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"genkl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
