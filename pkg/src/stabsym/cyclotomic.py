"""Exact arithmetic in cyclotomic fields Q[zeta_m], Galois maps, Gauss-sum roots.

Numbers are stored as integer coefficient vectors over the power basis
{zeta_m^k : k < phi(m)} together with a single positive denominator, fully
reduced modulo the m-th cyclotomic polynomial.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import ConductorTooSmall
from .zmod import require_prime


def _poly_divmod(num, den):
    """Exact division of integer polynomials, den monic. Coeff index = degree."""
    num = list(num)
    q = [0] * max(1, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for i, dc in enumerate(den):
                num[k + i] -= c * dc
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int):
    """Integer coefficients of Phi_m, index = degree."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for k in range(1, m):
        if m % k == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_poly(k))
            assert rem == [0]
    return tuple(poly)


class _Field:
    """Cached per-conductor data: reduction rows and zeta-power expansions."""

    def __init__(self, m: int):
        self.m = m
        poly = cyclotomic_poly(m)
        self.deg = len(poly) - 1
        deg = self.deg
        # x^k mod Phi_m for k in [deg, 2*deg - 2]
        red = []
        cur = [-c for c in poly[:deg]]  # x^deg
        red.append(tuple(cur))
        for _ in range(deg - 2):
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [a + top * b for a, b in zip(cur, red[0])]
            red.append(tuple(cur))
        self.red = red
        # zeta^j in the power basis for j in [0, m)
        pows = []
        v = [0] * deg
        v[0] = 1
        for _ in range(m):
            pows.append(tuple(v))
            shifted = [0] + v
            top = shifted.pop()
            v = shifted
            if top:
                v = [a + top * b for a, b in zip(v, red[0])]
        self.pows = pows

    def reduce(self, conv):
        """Reduce a convolution (length <= 2*deg - 1) to the power basis."""
        deg = self.deg
        out = list(conv[:deg]) + [0] * max(0, deg - len(conv))
        for k in range(deg, len(conv)):
            c = conv[k]
            if c:
                row = self.red[k - deg]
                for i, rv in enumerate(row):
                    if rv:
                        out[i] += c * rv
        return out


@lru_cache(maxsize=None)
def _field(m: int) -> _Field:
    return _Field(m)


def _normalize(num, den):
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycNumber:
    """An exact element of Q[zeta_m]."""

    __slots__ = ("m", "num", "den")

    def __init__(self, m, num, den=1, _norm=True):
        self.m = m
        if _norm:
            num, den = _normalize(list(num), den)
        self.num = tuple(num)
        self.den = den

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, m):
        return cls(m, (0,) * _field(m).deg, 1, _norm=False)

    @classmethod
    def from_fraction(cls, m, q):
        q = Fraction(q)
        deg = _field(m).deg
        return cls(m, (q.numerator,) + (0,) * (deg - 1), q.denominator, _norm=False)

    @classmethod
    def one(cls, m):
        return cls.from_fraction(m, 1)

    # -- predicates / conversions ---------------------------------------
    def is_zero(self):
        return all(x == 0 for x in self.num)

    def is_rational(self):
        return all(x == 0 for x in self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    @property
    def coeffs(self):
        return tuple(Fraction(x, self.den) for x in self.num)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        acc = 0j
        for k in reversed(range(len(self.num))):
            acc = acc * z + self.num[k]
        return acc / self.den

    def to_json(self):
        return {"m": self.m, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        fracs = [Fraction(p, q) for p, q in obj["coeffs"]]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(obj["m"], [int(f * den) for f in fracs], den)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.m != self.m:
                raise ValueError("mixed conductors")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.from_fraction(self.m, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self, o
        if a.den == b.den:
            return CycNumber(a.m, [x + y for x, y in zip(a.num, b.num)], a.den)
        return CycNumber(
            a.m, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den
        )

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.m, [-x for x in self.num], self.den, _norm=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycNumber(self.m, [x * other for x in self.num], self.den)
        if isinstance(other, Fraction):
            return CycNumber(
                self.m, [x * other.numerator for x in self.num], self.den * other.denominator
            )
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        f = _field(self.m)
        a, b = self.num, o.num
        conv = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return CycNumber(self.m, f.reduce(conv), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverting 0")
        # extended Euclid in Q[x] against Phi_m
        phi = [Fraction(c) for c in cyclotomic_poly(self.m)]
        a = [Fraction(x, self.den) for x in self.num]
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        r0, r1 = phi, a
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _frac_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
            while len(r1) > 1 and r1[-1] == 0:
                r1.pop()
        c = r1[0]
        if c == 0:
            raise ZeroDivisionError("not invertible (shares factor with Phi_m)")
        inv = [t / c for t in t1]
        deg = _field(self.m).deg
        inv = inv[:deg] + [Fraction(0)] * (deg - len(inv))
        den = 1
        for t in inv:
            den = den * t.denominator // gcd(den, t.denominator)
        return CycNumber(self.m, [int(t * den) for t in inv], den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycNumber.one(self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois_raw(self, t: int) -> "CycNumber":
        """Apply zeta_m -> zeta_m^t, gcd(t, m) = 1."""
        if gcd(t, self.m) != 1:
            raise ValueError("t must be a unit mod m")
        f = _field(self.m)
        out = [0] * f.deg
        for k, x in enumerate(self.num):
            if x:
                row = f.pows[(k * t) % self.m]
                for i, rv in enumerate(row):
                    if rv:
                        out[i] += x * rv
        return CycNumber(self.m, out, self.den)

    def conj(self) -> "CycNumber":
        return self.galois_raw(self.m - 1)

    def is_real(self):
        return self.conj() == self

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_fraction(self.m, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.m == other.m and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.m, self.num, self.den))

    def __repr__(self):
        return f"Cyc(m={self.m}, {self.num}/{self.den})"


def _frac_divmod(num, den):
    num = list(num)
    dn = len(den)
    q = [Fraction(0)] * max(1, len(num) - dn + 1)
    lead = den[-1]
    for k in range(len(num) - dn, -1, -1):
        c = num[k + dn - 1] / lead
        q[k] = c
        if c:
            for i, dc in enumerate(den):
                num[k + i] -= c * dc
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def root_of_unity(m: int, k: int) -> CycNumber:
    """zeta_m^k as an exact field element."""
    f = _field(m)
    return CycNumber(m, f.pows[k % m], 1, _norm=False)


def conductor_for(d: int) -> int:
    """Smallest conductor holding omega_d, tau, i and sqrt(d): 8 for d=2, else 4d."""
    require_prime(d)
    return 8 if d == 2 else 4 * d


@lru_cache(maxsize=None)
def omega(d: int) -> CycNumber:
    """The d-th root of unity exp(2*pi*i/d) in the standard conductor."""
    m = conductor_for(d)
    return root_of_unity(m, m // d)


@lru_cache(maxsize=None)
def tau(d: int) -> CycNumber:
    """tau = omega^((d+1)/2) for odd d; tau = i for d = 2."""
    if d == 2:
        return iunit(2)
    return omega(d) ** ((d + 1) // 2)


@lru_cache(maxsize=None)
def iunit(d: int) -> CycNumber:
    m = conductor_for(d)
    return root_of_unity(m, m // 4)


@lru_cache(maxsize=None)
def gauss_sum(d: int) -> CycNumber:
    """Quadratic Gauss sum sum_q omega_d^(q^2) for odd prime d."""
    if d == 2:
        raise ValueError("Gauss sum path requires odd d")
    w = omega(d)
    acc = CycNumber.zero(w.m)
    for q in range(d):
        acc = acc + root_of_unity(w.m, (w.m // d) * ((q * q) % d))
    return acc


@lru_cache(maxsize=None)
def sqrt_d(d: int, m: int | None = None) -> CycNumber:
    """Exact sqrt(d), real and positive in the canonical embedding."""
    require_prime(d)
    want = conductor_for(d)
    if m is None:
        m = want
    if m % want:
        raise ConductorTooSmall(f"conductor {m} lacks sqrt({d}); need multiple of {want}")
    if d == 2:
        z = root_of_unity(8, 1)
        s = z + z.conj()  # 2 cos(pi/4)
    elif d % 4 == 1:
        s = gauss_sum(d)
    else:
        s = gauss_sum(d) * iunit(d).inverse()  # Gauss sum equals i*sqrt(d)
    if m != want:
        s = _lift(s, m)
    assert s * s == CycNumber.from_fraction(s.m, d)
    assert s.is_real()
    # one-time numeric sign decision; exactness is certified by the two asserts
    approx = s.to_complex().real
    if approx < 0:
        s = -s
    assert abs(abs(s.to_complex().real) - d ** 0.5) < 1e-9
    return s


def _lift(x: CycNumber, m: int) -> CycNumber:
    """Embed x from conductor x.m into a multiple conductor m."""
    if m % x.m:
        raise ValueError("target conductor must be a multiple")
    k = m // x.m
    f = _field(m)
    out = [0] * f.deg
    for j, c in enumerate(x.num):
        if c:
            row = f.pows[(j * k) % m]
            for i, rv in enumerate(row):
                if rv:
                    out[i] += c * rv
    return CycNumber(m, out, x.den)


@dataclass(frozen=True)
class GaloisMap:
    """Galois automorphism C_alpha: omega_d -> omega_d^alpha, fixing i.

    The exponent is extended from Z_d^x to Z_m^x by acting trivially on the
    4th/8th-root part, so sqrt(d) picks up exactly the Legendre sign.
    """

    alpha: int
    d: int

    def __post_init__(self):
        require_prime(self.d)
        if self.d == 2:
            raise ValueError("Galois layer is defined for odd d")
        if self.alpha % self.d == 0:
            raise ValueError("alpha must be a unit mod d")

    @property
    def exponent(self) -> int:
        # CRT: t = alpha mod d, t = 1 mod 4
        d = self.d
        a = self.alpha % d
        for t in range(1, 4 * d, 1):
            if t % d == a and t % 4 == 1:
                return t
        raise AssertionError("CRT lift not found")


def galois_apply(c: GaloisMap, x: CycNumber) -> CycNumber:
    if x.m % (4 * c.d):
        raise ValueError("conductor does not contain omega_d")
    t = c.exponent
    # lift exponent from Z_{4d} to Z_m acting trivially on the extra part
    if x.m == 4 * c.d:
        return x.galois_raw(t)
    k = x.m // (4 * c.d)
    for s in range(1, x.m):
        if gcd(s, x.m) == 1 and s % (4 * c.d) == t and s % k == 1 % k:
            return x.galois_raw(s)
    raise ValueError("no compatible exponent lift")
