"""Exact arithmetic: rationals, real quadratic surds, and integer Mobius maps."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath as mp

__all__ = [
    "INF",
    "CuspClass",
    "GOLDEN",
    "Mat2",
    "PointAtInfinity",
    "ROTATE_EVEN",
    "ROTATE_ODD",
    "SHIFT",
    "SubgroupMembership",
    "Surd",
    "classify_subgroup",
    "cusp_class_gamma",
    "cusp_class_theta",
    "cusp_witness_gamma",
]


class PointAtInfinity:
    """Boundary point at infinity, a singleton usable with ``is`` and ``==``."""

    _instance: PointAtInfinity | None = None

    def __new__(cls) -> PointAtInfinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"


INF = PointAtInfinity()


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


_TRIAL_DIVISION_BOUND = 1 << 16


def _square_free_split(n: int) -> tuple[int, int]:
    """Write n = sf * s**2 with sf squarefree; returns (sf, s).

    Trial division stops at a fixed bound; the cofactor is then folded if it
    is a perfect square and otherwise taken squarefree.  Fixed-point
    discriminants of long periodic streams have huge square parts over a
    small kernel, so the fold is what keeps them canonical.
    """
    sf, s = 1, 1
    k = 2
    while k * k <= n and k <= _TRIAL_DIVISION_BOUND:
        if n % k == 0:
            e = 0
            while n % k == 0:
                n //= k
                e += 1
            s *= k ** (e // 2)
            if e & 1:
                sf *= k
        k += 1 if k == 2 else 2
    if n > 1:
        root = math.isqrt(n)
        if root * root == n:
            s *= root
            n = 1
    return sf * n, s


def _sign_linear(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for squarefree d > 1."""
    if b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    if (a > 0) == (b > 0):
        return _sign(a)
    t = a * a - b * b * d
    # t == 0 impossible: d is not a perfect square
    if a > 0:
        return 1 if t > 0 else -1
    return -1 if t > 0 else 1


def _sign_mixed(a: int, b: int, d: int, c: int, e: int) -> int:
    """Sign of a + b*sqrt(d) + c*sqrt(e) for distinct squarefree d, e > 1."""
    u = _sign_linear(a, b, d)
    v = _sign(c)
    if u == v:
        return u
    w = _sign_linear(a * a + b * b * d - c * c * e, 2 * a * b, d)
    if w > 0:
        return u
    if w < 0:
        return v
    return 0


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, u, v) with a*u + b*v == g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class Surd:
    """Canonical (p + q*sqrt(d))/r with integer slots.

    Invariants after construction: r > 0, d is squarefree, d == 1 exactly
    when the value is rational (then q == 0), and gcd(p, q, r) == 1.
    Comparisons work across different quadratic fields; ring arithmetic
    requires a common field and raises ValueError otherwise.
    """

    __slots__ = ("p", "q", "d", "r")

    def __init__(self, p: int, q: int = 0, d: int = 1, r: int = 1) -> None:
        if r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if d < 1:
            raise ValueError("radicand must be a positive integer")
        if q == 0:
            d = 1
        elif d > 1:
            d, square = _square_free_split(d)
            q *= square
        if d == 1:
            p, q = p + q, 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p = p
        self.q = q
        self.d = d
        self.r = r

    @classmethod
    def sqrt(cls, d: int) -> Surd:
        return cls(0, 1, d)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> Surd:
        f = Fraction(value)
        return cls(f.numerator, 0, 1, f.denominator)

    @classmethod
    def parse(cls, text: str) -> Surd:
        """Parse "(p+q*sqrt(D))/r", "q*sqrt(D)", "p/q", or an integer."""
        s = text.strip()
        m = _SURD_RE.fullmatch(s)
        if m:
            p, sign_ch, q, d, r = m.groups()
            q_val = int(q) if q else 1
            if sign_ch == "-":
                q_val = -q_val
            return cls(int(p), q_val, int(d), int(r) if r else 1)
        m = _SURD_BARE_RE.fullmatch(s)
        if m:
            p, sign_ch, q, d = m.groups()
            q_val = int(q) if q else 1
            if sign_ch == "-":
                q_val = -q_val
            return cls(int(p), q_val, int(d))
        m = _SQRT_RE.fullmatch(s)
        if m:
            q, d, r = m.groups()
            return cls(0, int(q) if q else 1, int(d), int(r) if r else 1)
        m = _FRAC_RE.fullmatch(s)
        if m:
            return cls(int(m.group(1)), 0, 1, int(m.group(2)))
        if _INT_RE.fullmatch(s):
            return cls(int(s))
        raise ValueError(f"cannot parse surd literal: {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    @property
    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("surd is irrational")
        return Fraction(self.p, self.r)

    def conjugate(self) -> Surd:
        return Surd(self.p, -self.q, self.d, self.r)

    def sign(self) -> int:
        if self.q == 0:
            return _sign(self.p)
        return _sign_linear(self.p, self.q, self.d)

    def compare(self, other: Surd | Fraction | int) -> int:
        o = _coerce(other)
        if o is None:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        a = self.p * o.r - o.p * self.r
        b = self.q * o.r
        c = -o.q * self.r
        if b == 0 and c == 0:
            return _sign(a)
        if c == 0:
            return _sign_linear(a, b, self.d)
        if b == 0:
            return _sign_linear(a, c, o.d)
        if self.d == o.d:
            return _sign_linear(a, b + c, self.d)
        return _sign_mixed(a, b, self.d, c, o.d)

    def floor(self) -> int:
        if self.d == 1:
            return self.p // self.r
        t = math.isqrt(self.q * self.q * self.d)
        root_floor = t if self.q > 0 else -t - 1
        n = (self.p + root_floor) // self.r
        while self.compare(n + 1) >= 0:
            n += 1
        while self.compare(n) < 0:
            n -= 1
        return n

    __floor__ = floor

    def inverse(self) -> Surd:
        if self.is_zero:
            raise ZeroDivisionError("division by zero surd")
        norm = self.p * self.p - self.q * self.q * self.d
        return Surd(self.r * self.p, -self.r * self.q, self.d, norm)

    def discriminant(self) -> int:
        """Discriminant of the primitive integer polynomial with this root."""
        if self.is_rational:
            raise ValueError("rational values have no quadratic discriminant")
        a = self.r * self.r
        b = -2 * self.p * self.r
        c = self.p * self.p - self.q * self.q * self.d
        g = math.gcd(math.gcd(a, b), c)
        return (b * b - 4 * a * c) // (g * g)

    def to_mpf(self) -> mp.mpf:
        value = mp.mpf(self.p)
        if self.q:
            value += self.q * mp.sqrt(self.d)
        return value / self.r

    def literal(self) -> str:
        if self.is_rational:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        sign_ch = "+" if self.q > 0 else "-"
        core = f"({self.p}{sign_ch}{abs(self.q)}*sqrt({self.d}))"
        return core if self.r == 1 else f"{core}/{self.r}"

    def _field(self, o: Surd) -> int:
        if self.d == 1:
            return o.d
        if o.d == 1 or o.d == self.d:
            return self.d
        raise ValueError("surds from different quadratic fields")

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return Surd(
            self.p * o.r + o.p * self.r,
            self.q * o.r + o.q * self.r,
            d,
            self.r * o.r,
        )

    __radd__ = __add__

    def __neg__(self) -> Surd:
        return Surd(-self.p, -self.q, self.d, self.r)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return Surd(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            d,
            self.r * o.r,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Surd(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self) -> Surd:
        return -self if self.sign() < 0 else self

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.compare(o) == 0

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.d, self.r))

    def __float__(self) -> float:
        return float(self.to_mpf())

    def __str__(self) -> str:
        return self.literal()

    def __repr__(self) -> str:
        return f"Surd({self.p}, {self.q}, {self.d}, {self.r})"


_INT_RE = re.compile(r"[+-]?\d+")
_FRAC_RE = re.compile(r"([+-]?\d+)\s*/\s*(\d+)")
_SQRT_RE = re.compile(r"(?:([+-]?\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)(?:\s*/\s*(\d+))?")
_SURD_BARE_RE = re.compile(r"([+-]?\d+)\s*([+-])\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)")
_SURD_RE = re.compile(
    r"\(\s*([+-]?\d+)\s*([+-])\s*(?:(\d+)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*\)(?:\s*/\s*(\d+))?"
)


def _coerce(x) -> Surd | None:
    if isinstance(x, Surd):
        return x
    if isinstance(x, int):
        return Surd(x)
    if isinstance(x, Fraction):
        return Surd(x.numerator, 0, 1, x.denominator)
    return None


@dataclass(frozen=True)
class Mat2:
    """Integer 2x2 matrix acting on boundary points by Mobius maps."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def mul(self, other: Mat2) -> Mat2:
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __matmul__ = mul

    def inverse(self) -> Mat2:
        det = self.det()
        if det not in (1, -1):
            raise ValueError("matrix is not invertible over the integers")
        return Mat2(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def pow(self, n: int) -> Mat2:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Mat2.identity()
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    __pow__ = pow

    def neg(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    __neg__ = neg

    def psl(self) -> Mat2:
        """Sign representative with c > 0, or c == 0 and d > 0."""
        if self.c < 0 or (self.c == 0 and self.d < 0):
            return self.neg()
        return self

    def residue(self) -> tuple[int, int, int, int]:
        return (self.a & 1, self.b & 1, self.c & 1, self.d & 1)

    def apply(self, x):
        """Mobius action on a Surd, Fraction, int, or INF."""
        if x is INF:
            if self.c == 0:
                return INF
            return Fraction(self.a, self.c)
        if isinstance(x, Surd):
            den = x * self.c + self.d
            if den.is_zero:
                return INF
            return (x * self.a + self.b) / den
        f = Fraction(x)
        den = self.c * f + self.d
        if den == 0:
            return INF
        return (self.a * f + self.b) / den


GAMMA_ODD_RESIDUES = frozenset({(1, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 0)})
THETA_RESIDUES = frozenset({(1, 0, 0, 1), (0, 1, 1, 0)})


@dataclass(frozen=True)
class SubgroupMembership:
    """Which of the standard groups a determinant-one matrix lies in."""

    full_modular: bool
    gamma_odd: bool
    theta: bool


def classify_subgroup(m: Mat2) -> SubgroupMembership:
    if m.det() != 1:
        raise ValueError("determinant must be 1")
    r = m.residue()
    return SubgroupMembership(True, r in GAMMA_ODD_RESIDUES, r in THETA_RESIDUES)


class CuspClass(Enum):
    INFINITY = "infinity"
    ONE = "one"


def _as_cusp(x) -> tuple[int, int]:
    """Reduced (numerator, denominator) of a cusp; INF maps to (1, 0)."""
    if x is INF:
        return 1, 0
    if isinstance(x, Surd):
        if not x.is_rational:
            raise ValueError("cusps are rational points or infinity")
        x = x.to_fraction()
    f = Fraction(x)
    return f.numerator, f.denominator


def cusp_witness_gamma(x) -> Mat2:
    """Element of the index-two odd group sending infinity to the cusp x."""
    a, c = _as_cusp(x)
    _, u, v = _egcd(a, c)
    m = Mat2(a, -v, c, u)
    if m.residue() in GAMMA_ODD_RESIDUES:
        return m
    # index two: adjusting by the unit shift flips the coset
    return m.mul(Mat2(1, 1, 0, 1))


def cusp_class_gamma(x) -> tuple[CuspClass, Mat2]:
    """Cusp class for the odd group (a single class) with a witness."""
    return CuspClass.INFINITY, cusp_witness_gamma(x)


def cusp_class_theta(x) -> CuspClass:
    """Cusp class for the even group: parity of the reduced fraction."""
    a, c = _as_cusp(x)
    if a & 1 and c & 1:
        return CuspClass.ONE
    return CuspClass.INFINITY


ROTATE_ODD = Mat2(0, -1, 1, 1)
ROTATE_EVEN = Mat2(0, -1, 1, 0)
SHIFT = Mat2(1, 2, 0, 1)
GOLDEN = Surd(1, 1, 5, 2)
