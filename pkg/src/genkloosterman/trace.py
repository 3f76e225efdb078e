"""Geometric side of the refined Petersson formula and spectral residuals."""
from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .characters import ThetaChar
from .genkl import constants, g_global

__all__ = [
    "bessel_j",
    "GeometricSide",
    "geometric_side",
    "tail_bound",
    "SpectralDataset",
    "SpectralEntry",
    "SchemaError",
    "load_spectral",
    "dump_spectral",
    "parse_spectral",
    "petersson_residual",
]


def bessel_j(nu: int, x: float) -> float:
    """J_nu(x) for integer nu >= 1: power series for x <= nu, Miller's recurrence above."""
    if nu < 1 or int(nu) != nu:
        raise ValueError("nu must be an integer >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0
    if x <= nu:
        # the alternating series loses ~ x / ln 10 digits to cancellation,
        # so sum it in decimal arithmetic
        with decimal.localcontext() as ctx:
            ctx.prec = 40 + int(x)
            h = decimal.Decimal(x) / 2
            term = h**nu / math.factorial(nu)
            tot, m = decimal.Decimal(0), 0
            tiny = decimal.Decimal(10) ** (-30)
            while True:
                tot += term
                m += 1
                term *= -h * h / (m * (m + nu))
                if abs(term) < tiny * abs(tot):
                    return float(tot)
    # downward recurrence from well above max(nu, x), normalized by
    # J_0 + 2 (J_2 + J_4 + ...) = 1
    start = 2 * ((max(nu, int(x)) + int(math.sqrt(60 * max(nu, x))) + 20) // 2)
    j_next, j = 0.0, 1e-300
    even, want = 0.0, 0.0
    for n in range(start, 0, -1):
        j_prev = 2 * n / x * j - j_next
        j_next, j = j, j_prev
        if abs(j) > 1e250:
            j *= 1e-250
            j_next *= 1e-250
            even *= 1e-250
            want *= 1e-250
        if n - 1 == nu:
            want = j
        if (n - 1) % 2 == 0 and n - 1 > 0:
            even += j
    norm = 2 * even + j  # j is J_0 here
    return want / norm


def tail_bound(nu: int, x_scale: float, c_l: int, c_max: int) -> float:
    """Bound for 2 pi sum over c = c_l t > c_max of |G(c)| / c * |J_nu(x_scale / c)|.

    Uses |G(c)| <= c and |J_nu(x)| <= (x/2)^nu / nu!.  For nu = 1 that sum
    diverges and the bound is inf.
    """
    if nu == 1:
        return math.inf
    T = c_max // c_l
    head = 2 * math.pi * (x_scale / (2 * c_l)) ** nu / math.factorial(nu)
    if T == 0:
        return head * (1 + 1 / (nu - 1))
    return head * T ** (1 - nu) / (nu - 1)


@dataclass
class GeometricSide:
    delta_term: int
    kloosterman_sum: complex
    c_max: int
    tail_bound: float
    kappa: int
    terms: list[dict] = field(default_factory=list)

    @property
    def value(self) -> complex:
        return self.delta_term + self.kloosterman_sum

    def to_json(self) -> dict:
        return {
            "delta": self.delta_term,
            "sum_re": _r(self.kloosterman_sum.real),
            "sum_im": _r(self.kloosterman_sum.imag),
            "tail_bound": _r(self.tail_bound) if math.isfinite(self.tail_bound) else None,
            "terms": [
                {"c": t["c"], "g_re": _r(t["g"].real), "g_im": _r(t["g"].imag),
                 "bessel": _r(t["bessel"]), "contrib_re": _r(t["contrib"].real),
                 "contrib_im": _r(t["contrib"].imag)}
                for t in self.terms
            ],
        }


def _r(x: float) -> float:
    return float(f"{x:.15g}")


def geometric_side(theta: ThetaChar, l: int, m1: int, m2: int, kappa: int, c_max: int) -> GeometricSide:
    """delta(m1 = m2) + 2 pi i^kappa sum over c_l | c <= c_max of G(c)/c J_{kappa-1}(4 pi sqrt(m1 m2)/c)."""
    p = theta.p
    if m1 <= 0 or m2 <= 0 or m1 % p == 0 or m2 % p == 0:
        raise ValueError("m1, m2 must be positive and coprime to p")
    if kappa < 2 or kappa % 2:
        raise ValueError("kappa must be even and >= 2")
    nu = kappa - 1
    cl = constants(theta, l).c_l
    sign = -1 if (kappa // 2) % 2 else 1  # i^kappa
    x_scale = 4 * math.pi * math.sqrt(m1 * m2)
    terms = []
    for c in range(cl, c_max + 1, cl):
        g = g_global(m1, m2, theta, c, l)
        b = bessel_j(nu, x_scale / c)
        contrib = 2 * math.pi * sign * g / c * b
        terms.append({"c": c, "g": g, "bessel": b, "contrib": contrib})
    re = math.fsum(t["contrib"].real for t in terms)
    im = math.fsum(t["contrib"].imag for t in terms)
    return GeometricSide(int(m1 == m2), complex(re, im), c_max,
                         tail_bound(nu, x_scale, cl, c_max), kappa, terms)


# spectral data


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralEntry:
    label: str
    lam: dict[int, float]
    petersson_norm: float


@dataclass(frozen=True)
class SpectralDataset:
    p: int
    level: int
    weight: int
    entries: tuple[SpectralEntry, ...] = ()

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "weight": self.weight,
            "entries": [
                {"label": e.label, "lambda": {str(m): v for m, v in sorted(e.lam.items())},
                 "petersson_norm": e.petersson_norm}
                for e in self.entries
            ],
        }


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    val = obj[key]
    if kind is float:
        ok = isinstance(val, (int, float)) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind) and not (kind is int and isinstance(val, bool))
    if not ok:
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def parse_spectral(text: str) -> SpectralDataset:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level: expected an object")
    p = _need(raw, "p", int, "top level")
    level = _need(raw, "level", int, "top level")
    weight = _need(raw, "weight", int, "top level")
    q, c = level, 0
    while q % p == 0:
        q //= p
        c += 1
    if q != 1 or c < 1:
        raise SchemaError(f"level: {level} is not a positive power of p={p}")
    items = _need(raw, "entries", list, "top level")
    entries = []
    for i, e in enumerate(items):
        where = f"entries[{i}]"
        label = _need(e, "label", str, where)
        lam_raw = _need(e, "lambda", dict, where)
        lam = {}
        for key, v in lam_raw.items():
            try:
                m = int(key)
            except ValueError:
                raise SchemaError(f"{where}.lambda: key {key!r} is not an integer") from None
            if m < 1:
                raise SchemaError(f"{where}.lambda: index {m} must be positive")
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SchemaError(f"{where}.lambda[{key}]: expected a number")
            lam[m] = float(v)
        if lam.get(1) != 1.0:
            raise SchemaError(f"{where}.lambda: lambda_1 must equal 1")
        norm = float(_need(e, "petersson_norm", float, where))
        if not norm > 0:
            raise SchemaError(f"{where}.petersson_norm: must be positive")
        entries.append(SpectralEntry(label, lam, norm))
    return SpectralDataset(p, level, weight, tuple(entries))


def load_spectral(path: str | Path) -> SpectralDataset:
    return parse_spectral(Path(path).read_text())


def dump_spectral(ds: SpectralDataset, path: str | Path) -> None:
    Path(path).write_text(json.dumps(ds.to_json(), indent=2))


def petersson_residual(ds: SpectralDataset, theta: ThetaChar, l: int, m1: int, m2: int,
                       kappa: int, c_max: int, gauge: float = 1.0) -> dict:
    """lhs = gauge * sum lambda_m1 conj(lambda_m2) / ||phi||^2 against the scaled geometric side."""
    if ds.p != theta.p:
        raise ValueError(f"dataset prime {ds.p} != {theta.p}")
    if ds.level != theta.p**theta.c_pi:
        raise ValueError(f"dataset level {ds.level} != p^c(pi) = {theta.p ** theta.c_pi}")
    if ds.weight != kappa:
        raise ValueError(f"dataset weight {ds.weight} != kappa = {kappa}")
    terms = []
    for e in ds.entries:
        if m1 not in e.lam or m2 not in e.lam:
            raise ValueError(f"entry {e.label!r} lacks lambda_{m1} or lambda_{m2}")
        terms.append(e.lam[m1] * e.lam[m2] / e.petersson_norm)
    lhs = gauge * math.fsum(terms)
    geo = geometric_side(theta, l, m1, m2, kappa, c_max)
    scale = constants(theta, l).CF_l * (4 * math.pi) ** (kappa - 1) / math.factorial(kappa - 2)
    rhs = scale * geo.value
    return {"lhs": lhs, "rhs": rhs, "residual": lhs - rhs, "tail_bound": scale * geo.tail_bound}
