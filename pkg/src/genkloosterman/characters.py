"""Characters of L^x trivial on F^x, parametrized by alpha_theta.

On principal units theta(1 + u) = psi_L(alpha_theta * log(1 + u)) with
``alpha_theta = alpha0 / (varpi_L**c * sqrt D)``.  For every kind this gives
``theta(z) = e(2 * alpha0 * Y / p**i0)`` where Y is the sqrt(D)-coordinate of
log(z) (split: Y = (log a - log b) / 2).

The tame part of a field-case character is optional.  Without it, ``theta``
can only be evaluated on F^x U_L(1), which is all the Kloosterman-type sums
need; families at depth 0 attach explicit tame exponents.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CycValue
from .padic import PrecisionError, RootOfUnity, log1p_mod, teichmuller
from .quadratic import EtaleQuadratic, QuadElement, in_ZU1, log1p_L, log_L, psi_L, residue_field_dlog

__all__ = [
    "TameDataUnavailable",
    "ThetaChar",
    "UnitCharacter",
    "UnitCoordinates",
    "eval_theta",
    "unit_coordinates",
    "theta_exponent",
    "alpha_family",
    "family_index",
    "family_average",
    "in_OF_U",
    "dlog_table",
]


class TameDataUnavailable(ValueError):
    """theta has no tame component and z lies outside F^x U_L(1)."""


@lru_cache(maxsize=None)
def dlog_table(p: int) -> dict[int, int]:
    """Discrete log on (Z/p)^x for the least primitive root."""
    for g in range(2, p):
        table, x = {}, 1
        for k in range(p - 1):
            table[x] = k
            x = x * g % p
        if len(table) == p - 1:
            return table
    raise AssertionError


@dataclass(frozen=True)
class UnitCharacter:
    """chi on Z_p^x: chi(omega * <x>) = e(tame * dlog(x)/(p-1)) * e(alpha0 * log<x> / p^cond).

    ``cond`` >= 2 is the conductor; chi(p) is taken to be 1.
    """

    p: int
    cond: int
    alpha0: int
    tame_exp: int = 0

    def exponent(self, x: int) -> Fraction:
        """chi(x) = e(returned value) for an integer unit x."""
        p, c = self.p, self.cond
        if x % p == 0:
            raise ValueError("chi evaluated at a non-unit")
        d = dlog_table(p)[x % p]
        w = x * pow(teichmuller(x, p, c + 1), -1, p ** (c + 1))
        lg = log1p_mod(w - 1, p, c)
        return Fraction(self.tame_exp * d, p - 1) + Fraction(self.alpha0 * lg, p**c)

    def value(self, x: int) -> complex:
        f = self.exponent(x)
        return complex(RootOfUnity(f.denominator, f.numerator))


@dataclass(frozen=True)
class ThetaChar:
    """theta on L^x with theta|F^x = 1.

    Field cases store alpha0 (mod p^i0), an optional inert tame exponent
    (mod p+1) and the ramified sign theta(sqrt D).  Split theta is
    chi1 x chi1^-1 with chi1 given by alpha0 and a tame exponent mod p-1.
    """

    alg: EtaleQuadratic
    cond: int
    alpha0: int
    tame_exp: int | None = None
    sign: int = 1

    def __post_init__(self):
        alg, p = self.alg, self.alg.p
        if self.cond % alg.e_L:
            raise ValueError("conductor must be a multiple of e_L")
        i0 = self.cond // alg.e_L
        if i0 < 2:
            raise ValueError("need i0 = c(theta)/e_L >= 2")
        if self.alpha0 % p == 0:
            raise ValueError("alpha0 must be a unit")
        if alg.prec < i0 + 2:
            raise ValueError(f"algebra precision {alg.prec} too small for i0={i0}")
        object.__setattr__(self, "alpha0", self.alpha0 % p**i0)
        if alg.kind == "split":
            object.__setattr__(self, "tame_exp", (self.tame_exp or 0) % (p - 1))
        elif alg.kind == "inert":
            if self.tame_exp is not None:
                object.__setattr__(self, "tame_exp", self.tame_exp % (p + 1))
        else:
            if self.tame_exp not in (None, 0):
                raise ValueError("ramified theta has trivial tame part")
            object.__setattr__(self, "tame_exp", None)
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")

    @classmethod
    def make(cls, p: int, kind: str, cond: int, alpha0: int = 1, tame_exp=None,
             sign: int = 1, D: int | None = None, extra_prec: int = 10) -> ThetaChar:
        e = 2 if kind == "ramified" else 1
        prec = cond // e + extra_prec
        alg = EtaleQuadratic.standard(p, kind, prec) if D is None else EtaleQuadratic(p, kind, D, prec)
        return cls(alg, cond, alpha0, tame_exp, sign)

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def kind(self) -> str:
        return self.alg.kind

    @property
    def i0(self) -> int:
        return self.cond // self.alg.e_L

    @property
    def l0(self) -> int:
        return 1 if self.kind == "inert" else 0

    @property
    def c_pi(self) -> int:
        return 2 * self.i0 + self.alg.e_L - 1

    @property
    def chi1(self) -> UnitCharacter:
        if self.kind != "split":
            raise ValueError("chi1 exists only for split theta")
        return UnitCharacter(self.p, self.i0, self.alpha0, self.tame_exp)

    @property
    def tame_order(self) -> int:
        return {"split": self.p - 1, "inert": self.p + 1, "ramified": 2}[self.kind]

    @property
    def value_order(self) -> int:
        """An order N with every value of theta an N-th root of unity."""
        return self.tame_order * self.p**self.i0

    def alpha(self) -> QuadElement:
        """alpha_theta as an element of L."""
        alg, p = self.alg, self.p
        a = Fraction(self.alpha0, p**self.i0)
        if alg.kind == "split":
            return alg.element(a, -a)
        return alg.element(0, a / alg.D)

    def conjugate(self) -> ThetaChar:
        """theta composed with the Galois conjugation (alpha -> -alpha)."""
        t = None if self.tame_exp is None else -self.tame_exp
        return replace(self, alpha0=-self.alpha0, tame_exp=t)

    def with_tame(self, tame_exp: int) -> ThetaChar:
        return replace(self, tame_exp=tame_exp)

    def to_json(self) -> dict:
        return {"p": self.p, "kind": self.kind, "D": self.alg.D, "cond": self.cond,
                "alpha0": self.alpha0, "tame_exp": self.tame_exp, "sign": self.sign}


@dataclass(frozen=True)
class UnitCoordinates:
    """What theta needs to know about an invertible z.

    Field: z = varpi_L^n * omega * <z>, ``tame`` = discrete log of omega in
    the residue field (inert; 0 otherwise) and ``y`` = sqrt(D)-coordinate of
    log<z> mod p^prec.  Split: ``n`` = (v(a), v(b)), ``tame`` = dlog a - dlog b
    and ``y`` = log<a> - log<b>.
    """

    n: int | tuple[int, int]
    tame: int
    y: int
    prec: int
    in_ZU1: bool


def _field_unit_part(alg: EtaleQuadratic, z: QuadElement, prec: int):
    """(n, X, Y) with z = varpi_L^n * (X + Y sqrt D), X + Y sqrt D a unit mod p^prec."""
    n = z.v_L
    x, y = z.x, z.y
    p = alg.p
    if alg.kind == "inert":
        s = alg.scalar(Fraction(1, p**n))
        x, y = x * s, y * s
    else:
        # divide by sqrt(D)^n, two steps at a time through D
        h, odd = divmod(n, 2)
        s = alg.scalar(Fraction(1, alg.D**h))
        x, y = x * s, y * s
        if odd:
            x, y = y, x / alg.D
    return n, x.residue(prec), y.residue(prec)


def unit_coordinates(alg: EtaleQuadratic, z: QuadElement, prec: int) -> UnitCoordinates:
    p = alg.p
    work = prec + 2
    if alg.kind == "split":
        out = []
        for c in (z.x, z.y):
            if c.is_zero:
                raise ValueError("theta evaluated at a zero divisor")
            u = c.unit_residue(work)
            w = u * pow(teichmuller(u, p, work), -1, p**work) % p**work
            out.append((c.val, dlog_table(p)[u % p], log1p_mod(w - 1, p, prec)))
        (va, da, la), (vb, db, lb) = out
        ok = va == vb and (z.x.unit - z.y.unit) % p == 0
        return UnitCoordinates((va, vb), da - db, (la - lb) % p**prec, prec, ok)
    n, X, Y = _field_unit_part(alg, z, work)
    m = p**work
    if alg.kind == "inert":
        _, table = residue_field_dlog(p, alg.D)
        tame = table[(X % p, Y % p)]
        # Teichmüller: iterate u -> u^(p^2)
        wx, wy = X, Y
        while True:
            nx, ny = _quad_pow(wx, wy, alg.D, p * p, m)
            if (nx, ny) == (wx, wy):
                break
            wx, wy = nx, ny
        # <z> = z * omega^-1, and omega^-1 = omega^(p^2 - 2)
        ix, iy = _quad_pow(wx, wy, alg.D, p * p - 2, m)
        ux, uy = (X * ix + alg.D * Y * iy) % m, (X * iy + Y * ix) % m
        zu1 = Y % p == 0
    else:
        tame = 0
        om = teichmuller(X, p, work)
        inv = pow(om, -1, m)
        ux, uy = X * inv % m, Y * inv % m
        zu1 = n % 2 == 0
    _, ly = log1p_L(ux - 1, uy, alg.D, p, prec, alg.e_L)
    return UnitCoordinates(n, tame, ly, prec, zu1)


def _quad_pow(x: int, y: int, D: int, e: int, m: int) -> tuple[int, int]:
    rx, ry = 1, 0
    while e:
        if e & 1:
            rx, ry = (rx * x + D * ry * y) % m, (rx * y + ry * x) % m
        x, y = (x * x + D * y * y) % m, (2 * x * y) % m
        e >>= 1
    return rx, ry


def theta_exponent(theta: ThetaChar, uc: UnitCoordinates) -> Fraction:
    """theta(z) = e(returned value), from precomputed coordinates of z."""
    p, i0 = theta.p, theta.i0
    if uc.prec < i0:
        raise PrecisionError("coordinates too coarse for this conductor")
    kind = theta.kind
    if kind == "split":
        return Fraction(theta.tame_exp * uc.tame, p - 1) + Fraction(theta.alpha0 * uc.y, p**i0)
    wild = Fraction(2 * theta.alpha0 * uc.y, p**i0)
    if kind == "ramified":
        return wild + (Fraction(1, 2) if theta.sign == -1 and uc.n % 2 else 0)
    if theta.tame_exp is None:
        if not uc.in_ZU1:
            raise TameDataUnavailable("tame data unavailable outside F^x U_L(1)")
        return wild
    return wild + Fraction(theta.tame_exp * uc.tame, p + 1)


def _exp_to_cyc(f: Fraction) -> CycValue:
    return CycValue.from_root(f.denominator, f.numerator)


def eval_theta(theta: ThetaChar, z: QuadElement) -> CycValue:
    """theta(z) as an exact root of unity.

    On F^x U_L(1) this goes through z = f*v and psi_L(alpha * log v);
    elsewhere it uses the Teichmüller decomposition and the tame data.
    """
    alg = theta.alg
    if z.alg != alg:
        raise ValueError("element from another algebra")
    if alg.kind != "split":
        ok, fv = in_ZU1(z)
        if ok:
            v = fv[1]
            r = psi_L(theta.alpha() * log_L(v, theta.i0 + 1))
            return CycValue.from_root(r.order, r.exponent)
    uc = unit_coordinates(alg, z, theta.i0)
    return _exp_to_cyc(theta_exponent(theta, uc) % 1)


# families


def _check_range(theta: ThetaChar, n: int, j: int):
    if not (0 <= j <= n < theta.i0):
        raise ValueError(f"need 0 <= j <= n < i0={theta.i0}, got n={n}, j={j}")


def alpha_family(theta: ThetaChar, n: int, j: int) -> list[ThetaChar]:
    """One representative per class of theta[n] / ~_j, theta first."""
    _check_range(theta, n, j)
    p, i0 = theta.p, theta.i0
    if n == j:
        return [theta]
    if j >= 1:
        shifts = range(p ** (n - j))
        return [replace(theta, alpha0=theta.alpha0 * (1 + p ** (i0 - n) * s)) for s in shifts]
    if theta.kind == "ramified":
        return [replace(theta, alpha0=theta.alpha0 * (1 + p ** (i0 - n) * s)) for s in range(p**n)]
    base = theta.tame_exp or 0
    out = []
    for t in range(theta.tame_order):
        for s in range(p ** (n - 1)):
            out.append(replace(theta, alpha0=theta.alpha0 * (1 + p ** (i0 - n) * s),
                               tame_exp=base + t))
    return out


def family_index(theta: ThetaChar, n: int, m: int) -> int:
    """[theta[n] : theta[m]]."""
    _check_range(theta, n, m)
    if n == m:
        return 1
    p = theta.p
    if m == 0:
        first = {"split": p - 1, "inert": p + 1, "ramified": p}[theta.kind]
        return first * p ** (n - 1)
    return p ** (n - m)


def in_OF_U(z: QuadElement, n: int) -> bool:
    """Is the unit z in O_F^x U_L(n)?"""
    alg = z.alg
    if not z.is_unit():
        raise ValueError("expected a unit")
    if alg.kind == "split":
        return (z.x - z.y).val >= n
    if z.x.is_zero or z.x.val > 0:
        return False
    w = z.y / z.x
    if alg.kind == "inert":
        return w.val >= n
    return 2 * w.val + 1 >= n


def family_average(theta: ThetaChar, j: int, x: QuadElement) -> CycValue:
    """Average of theta'(x) over theta' in theta[j] / ~_0."""
    if j < 1:
        raise ValueError("family_average needs j >= 1")
    if not x.is_unit():
        raise ValueError("family_average needs a unit")
    fam = alpha_family(theta, j, 0)
    uc = unit_coordinates(theta.alg, x, theta.i0)
    return family_average_coords(fam, uc)


def family_average_coords(fam: list[ThetaChar], uc: UnitCoordinates) -> CycValue:
    n = fam[0].value_order
    exps = []
    for t in fam:
        f = theta_exponent(t, uc)
        exps.append(f.numerator * (n // f.denominator))
    return CycValue.from_terms(n, exps).scale(Fraction(1, len(fam))).normalize()
