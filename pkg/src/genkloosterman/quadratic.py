"""Étale quadratic algebras over Q_p: split F x F, inert F(sqrt D), ramified F(sqrt D).

Field elements are ``x + y*sqrt(D)``; split elements are coordinate pairs
``(a, b)``.  Coordinates are :class:`~genkloosterman.padic.PadicScalar`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .padic import PadicScalar, PrimePower, PrecisionError, RootOfUnity, psi_p, valuation

__all__ = [
    "EtaleQuadratic",
    "QuadElement",
    "norm",
    "trace",
    "conj",
    "in_ZU1",
    "psi_L",
    "log_L",
    "log1p_L",
    "smallest_nonresidue",
]

KINDS = ("split", "inert", "ramified")


def smallest_nonresidue(p: int) -> int:
    return next(r for r in range(2, p) if pow(r, (p - 1) // 2, p) == p - 1)


@dataclass(frozen=True)
class EtaleQuadratic:
    """L/Q_p together with a working relative precision ``prec``."""

    p: int
    kind: str
    D: int | None = None
    prec: int = 12

    def __post_init__(self):
        PrimePower(self.p, self.prec)
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        p, D = self.p, self.D
        if self.kind == "split":
            if D is not None:
                raise ValueError("split algebra takes no D")
            return
        if D is None:
            raise ValueError(f"{self.kind} algebra needs D")
        if self.kind == "inert" and (D % p == 0 or pow(D, (p - 1) // 2, p) != p - 1):
            raise ValueError(f"D={D} is not a unit non-residue mod {p}")
        if self.kind == "ramified" and (valuation(D, p) != 1):
            raise ValueError(f"D={D} must have valuation 1")

    @classmethod
    def standard(cls, p: int, kind: str, prec: int = 12, ramified_class: int = 0) -> EtaleQuadratic:
        """Fixed representatives: inert D = least non-residue, ramified D = p or p*r."""
        if kind == "split":
            return cls(p, kind, None, prec)
        if kind == "inert":
            return cls(p, kind, smallest_nonresidue(p), prec)
        if kind == "ramified":
            return cls(p, kind, p * (smallest_nonresidue(p) if ramified_class else 1), prec)
        raise ValueError(f"unknown algebra kind {kind!r}")

    @property
    def e_L(self) -> int:
        return 2 if self.kind == "ramified" else 1

    @property
    def is_field(self) -> bool:
        return self.kind != "split"

    def scalar(self, x) -> PadicScalar:
        if isinstance(x, PadicScalar):
            return x
        return PadicScalar.of(x, self.p, self.prec)

    def element(self, x, y=0) -> QuadElement:
        return QuadElement(self, self.scalar(x), self.scalar(y))

    def one(self) -> QuadElement:
        return self.element(1, 1) if self.kind == "split" else self.element(1, 0)

    def from_F(self, f) -> QuadElement:
        return self.element(f, f) if self.kind == "split" else self.element(f, 0)

    def with_prec(self, prec: int) -> EtaleQuadratic:
        return EtaleQuadratic(self.p, self.kind, self.D, prec)

    def to_json(self) -> dict:
        return {"p": self.p, "kind": self.kind, "D": self.D}


@dataclass(frozen=True)
class QuadElement:
    alg: EtaleQuadratic
    x: PadicScalar
    y: PadicScalar

    def _other(self, w) -> QuadElement:
        if isinstance(w, QuadElement):
            if w.alg != self.alg:
                raise ValueError("elements of different algebras")
            return w
        return self.alg.from_F(w)

    def __add__(self, w):
        w = self._other(w)
        return QuadElement(self.alg, self.x + w.x, self.y + w.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.alg, -self.x, -self.y)

    def __sub__(self, w):
        return self + (-self._other(w))

    def __mul__(self, w):
        w = self._other(w)
        if self.alg.kind == "split":
            return QuadElement(self.alg, self.x * w.x, self.y * w.y)
        D = self.alg.D
        return QuadElement(self.alg, self.x * w.x + D * (self.y * w.y), self.x * w.y + self.y * w.x)

    __rmul__ = __mul__

    def inverse(self) -> QuadElement:
        if self.alg.kind == "split":
            return QuadElement(self.alg, self.x.inverse(), self.y.inverse())
        n = norm(self)
        return QuadElement(self.alg, self.x / n, -self.y / n)

    def __truediv__(self, w):
        return self * self._other(w).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.alg.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, w):
        if not isinstance(w, QuadElement):
            return NotImplemented
        return self.alg == w.alg and self.x == w.x and self.y == w.y

    def __hash__(self):
        return hash((self.alg, self.x, self.y))

    @property
    def v_L(self) -> int:
        """Normalized valuation on L (ramified: through the norm)."""
        if self.alg.kind == "ramified":
            n = norm(self)
            if n.is_zero:
                raise PrecisionError("valuation of an element indistinguishable from 0")
            return n.val
        vals = [c.val for c in (self.x, self.y) if not c.is_zero]
        if not vals:
            raise PrecisionError("valuation of an element indistinguishable from 0")
        if self.alg.kind == "split" and len(vals) < 2:
            raise ValueError("zero divisor in the split algebra")
        return min(vals)

    def is_unit(self) -> bool:
        if self.alg.kind == "split":
            return not self.x.is_zero and not self.y.is_zero and self.x.val == 0 and self.y.val == 0
        return self.v_L == 0

    def in_U(self, n: int) -> bool:
        """Membership in U_L(n) = 1 + p_L^n (U_L(0) = units)."""
        if n == 0:
            return self.is_unit()
        d = self - self.alg.one()
        if self.alg.kind == "ramified":
            return min(2 * d.x.val, 2 * d.y.val + 1) >= n
        return min(d.x.val, d.y.val) >= n

    def coords(self, n: int) -> tuple[int, int]:
        """Integer coordinates mod p^n (both must be integral)."""
        return self.x.residue(n), self.y.residue(n)

    def __repr__(self):
        if self.alg.kind == "split":
            return f"({self.x!r}, {self.y!r})"
        return f"[{self.x!r}] + [{self.y!r}]*sqrt({self.alg.D})"


def conj(z: QuadElement) -> QuadElement:
    if z.alg.kind == "split":
        return QuadElement(z.alg, z.y, z.x)
    return QuadElement(z.alg, z.x, -z.y)


def norm(z: QuadElement) -> PadicScalar:
    if z.alg.kind == "split":
        return z.x * z.y
    return z.x * z.x - z.alg.D * (z.y * z.y)


def trace(z: QuadElement) -> PadicScalar:
    if z.alg.kind == "split":
        return z.x + z.y
    return z.x + z.x


def psi_L(z: QuadElement) -> RootOfUnity:
    return psi_p(trace(z))


def in_ZU1(z: QuadElement):
    """Decide z in F^x U_L(1); on success return (True, (f, v)) with z = f*v."""
    alg = z.alg
    if alg.kind == "split":
        a, b = z.x, z.y
        if a.is_zero or b.is_zero:
            return False, None
        r = b / a
        if r.val != 0 or not (r - 1).is_zero and (r - 1).val < 1:
            return False, None
        return True, (a, QuadElement(alg, alg.scalar(1), r))
    x, y = z.x, z.y
    if x.is_zero:
        return False, None
    f = x
    v = QuadElement(alg, alg.scalar(1), y / x)
    w = v.y
    if alg.kind == "inert":
        ok = w.is_zero or w.val >= 1
    else:
        ok = w.is_zero or w.val >= 0
    if not ok:
        return False, None
    return True, (f, v)


def log1p_L(X: int, Y: int, D: int, p: int, prec: int, e: int) -> tuple[int, int]:
    """Coordinates mod p^prec of log(1 + X + Y sqrt D) in a quadratic field.

    Requires v_L(X + Y sqrt D) >= 1; ``e`` is the ramification index.
    """
    from .padic import _log_terms

    n_max, extra = _log_terms(p, prec, e, 1)
    big = p ** (prec + extra)
    m = p**prec
    X, Y = X % big, Y % big
    ax, ay = 0, 0
    zx, zy = 1, 0
    for n in range(1, n_max + 1):
        zx, zy = (zx * X + D * zy * Y) % big, (zx * Y + zy * X) % big
        s, q = 0, n
        while q % p == 0:
            q //= p
            s += 1
        if zx % p**s or zy % p**s:
            raise ArithmeticError("log series term not integral")
        c = pow(q, -1, m) if n % 2 else -pow(q, -1, m)
        ax += (zx // p**s) * c
        ay += (zy // p**s) * c
    return ax % m, ay % m


def log_L(z: QuadElement, prec: int | None = None) -> QuadElement:
    """log(z) for z in U_L(1), coordinates to absolute precision p^prec."""
    alg = z.alg
    prec = alg.prec if prec is None else prec
    if not z.in_U(1):
        raise ValueError("log_L: argument not in U_L(1)")
    from .padic import log1p_mod

    d = z - alg.one()
    if alg.kind == "split":
        a = log1p_mod(d.x.residue(prec), alg.p, prec)
        b = log1p_mod(d.y.residue(prec), alg.p, prec)
        out = (a, b)
    else:
        out = log1p_L(d.x.residue(prec), d.y.residue(prec), alg.D, alg.p, prec, alg.e_L)
    cut = PadicScalar.zero(alg.p, prec)
    return QuadElement(alg, alg.scalar(out[0]) + cut, alg.scalar(out[1]) + cut)


@lru_cache(maxsize=None)
def residue_field_dlog(p: int, D: int) -> tuple[tuple[int, int], dict]:
    """A generator of F_p(sqrt D)^x and the discrete-log table on (x mod p, y mod p)."""
    order = p * p - 1
    for gx in range(p):
        for gy in range(1, p):
            table = {}
            cx, cy = 1, 0
            for k in range(order):
                if (cx, cy) in table:
                    break
                table[(cx, cy)] = k
                cx, cy = (cx * gx + D * cy * gy) % p, (cx * gy + cy * gx) % p
            if len(table) == order:
                return (gx, gy), table
    raise AssertionError("no generator found")
