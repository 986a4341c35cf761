"""Digit streams for five continued-fraction systems and their shift maps.

The classical system (``rcf``) and the odd (``ocf``) and even (``ecf``)
systems expand numbers in ``(0, 1)`` with an optional leading integer digit;
the grotesque system (``gcf``) expands the golden interval ``(G-2, G)`` and
the extended even system (``eecf``) expands ``(-1, 1)``, both with the sign
carried by the first digit.  Everything is exact: rationals give finite
streams, real quadratic surds give eventually periodic ones, and evaluation
inverts expansion on the nose.

The two-sided shift on digit sequences is exposed through ``ExtensionPoint``
together with the forward and inverse extension maps of the odd and even
systems, plus an independent inverse route used as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .exact import GOLDEN, Mat2, Surd

__all__ = [
    "BoundaryError",
    "Digit",
    "DigitStream",
    "ExtensionPoint",
    "KINDS",
    "cf_evaluate",
    "ecf_expand",
    "ecf_leading",
    "ecf_step",
    "eecf_expand",
    "eecf_step",
    "eecf_to_ecf",
    "gcf_expand",
    "gcf_step",
    "inverse_via_rho",
    "inverse_via_rho_even",
    "natural_extension_even",
    "natural_extension_even_inv",
    "natural_extension_odd",
    "natural_extension_odd_inv",
    "ocf_expand",
    "ocf_leading",
    "ocf_step",
    "periodic_leading_value",
    "rcf_expand",
    "rcf_leading",
    "rcf_step",
    "tail",
    "tail_orbit",
    "validate_stream",
]

Value = Surd | Fraction

KINDS = ("rcf", "ocf", "gcf", "ecf", "eecf")

DEFAULT_MAX_DEPTH = 256

_GOLDEN_LO = GOLDEN - 2


class BoundaryError(ValueError):
    """A point sits where no branch is defined: an endpoint or a digit tie."""


class Digit(NamedTuple):
    a: int
    eps: int


@dataclass(frozen=True)
class DigitStream:
    """An exact expansion: optional leading digit, preperiod, repeating tail.

    ``period == ()`` with ``truncated == False`` means the stream is finite.
    ``truncated == True`` marks a depth-limited prefix with no exact value.
    ``notes`` carries converter diagnostics and never affects the value.
    """

    kind: str
    leading: Digit | None
    preperiod: tuple[Digit, ...]
    period: tuple[Digit, ...]
    truncated: bool = False
    notes: tuple[str, ...] = ()

    @property
    def is_finite(self) -> bool:
        return not self.period and not self.truncated

    @property
    def purely_periodic_leading(self) -> bool:
        """True when the leading digit itself belongs to the repeating cycle."""
        return (
            self.leading is not None
            and not self.preperiod
            and bool(self.period)
            and self.period[-1] == self.leading
        )

    def fractional_digits(self, count: int) -> tuple[Digit, ...]:
        """The first ``count`` digits after the leading one, unrolling the period."""
        out = list(self.preperiod[:count])
        i = 0
        while self.period and len(out) < count:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def drop_first(self) -> "DigitStream":
        """The stream of the shifted value; only fractional streams shift."""
        if self.leading is not None:
            raise ValueError("cannot shift a stream with a leading digit")
        if self.preperiod:
            return DigitStream(self.kind, None, self.preperiod[1:], self.period, self.truncated)
        if self.period:
            rotated = self.period[1:] + self.period[:1]
            return DigitStream(self.kind, None, (), rotated)
        raise ValueError("cannot shift an empty stream")


def _as_value(x: Value | int) -> Value:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Surd):
        return x.to_fraction() if x.is_rational else x
    raise TypeError(f"expected an exact number, got {type(x).__name__}")


def _sign_of(v: Value) -> int:
    if isinstance(v, Surd):
        return v.sign()
    return (v > 0) - (v < 0)


def _integer_or_none(v: Value) -> int | None:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return None


# -- step maps ----------------------------------------------------------------


def ocf_step(x: Value | int) -> tuple[Digit, Value]:
    """One odd Gauss step on (0, 1]: odd digit, sign, and exact remainder.

    Reciprocals of even integers sit between two branches and are rejected;
    reciprocals of odd integers terminate with remainder zero.
    """
    x = _as_value(x)
    if not 0 < x <= 1:
        raise ValueError(f"odd step needs x in (0, 1], got {x}")
    inv = 1 / x
    n = _integer_or_none(inv)
    if n is not None:
        if n % 2 == 0:
            raise BoundaryError(f"branch endpoint 1/{n} has two odd readings")
        return Digit(n, 1), Fraction(0)
    m = math.floor(inv)
    if m % 2 == 1:
        return Digit(m, 1), inv - m
    return Digit(m + 1, -1), (m + 1) - inv


def ecf_step(x: Value | int) -> tuple[Digit, Value]:
    """One even Gauss step on (0, 1): even digit and exact remainder."""
    x = _as_value(x)
    if not 0 < x <= 1:
        raise ValueError(f"even step needs x in (0, 1], got {x}")
    inv = 1 / x
    n = _integer_or_none(inv)
    if n is not None:
        if n % 2 == 1:
            raise BoundaryError(f"branch endpoint 1/{n} has two even readings")
        return Digit(n, 1), Fraction(0)
    m = math.floor(inv)
    if m % 2 == 0:
        return Digit(m, 1), inv - m
    return Digit(m + 1, -1), (m + 1) - inv


def rcf_step(x: Value | int) -> tuple[Digit, Value]:
    """One classical Gauss step on (0, 1)."""
    x = _as_value(x)
    if not 0 < x < 1:
        raise ValueError(f"classical step needs x in (0, 1), got {x}")
    inv = 1 / x
    n = _integer_or_none(inv)
    if n is not None:
        return Digit(n, 1), Fraction(0)
    m = math.floor(inv)
    return Digit(m, 1), inv - m


def gcf_step(y: Value | int) -> tuple[Digit, Value]:
    """One grotesque step on the golden interval (G-2, G), y nonzero.

    The digit is the unique odd b with 1/|y| - G <= b <= 1/|y| - G + 2, paired
    with the sign of y; when both ends of that window are attained (possible
    only in the golden field) the digit is ambiguous and the point is rejected.
    """
    y = _as_value(y)
    if isinstance(y, Fraction) and y == 0:
        raise ValueError("the grotesque step is undefined at 0")
    if not _GOLDEN_LO < y < GOLDEN:
        raise ValueError(f"grotesque step needs y in the golden interval, got {y}")
    s = _sign_of(y)
    inv = 1 / abs(y)
    n = _integer_or_none(inv)
    if n is not None:
        b = n if n % 2 == 1 else n - 1
        return Digit(b, s), inv - b
    m = math.floor(inv)
    candidates = [
        c
        for c in range(max(1, m - 2), m + 3)
        if c % 2 == 1 and (GOLDEN + c) >= inv and inv >= (GOLDEN + c - 2)
    ]
    if len(candidates) == 2:
        raise BoundaryError(f"digit tie between {candidates[0]} and {candidates[1]}")
    if len(candidates) != 1:
        raise AssertionError(f"digit window failed for {y}")
    b = candidates[0]
    return Digit(b, s), inv - b


def eecf_step(y: Value | int) -> tuple[Digit, Value]:
    """One extended even step on (-1, 1), y nonzero: nearest even reciprocal."""
    y = _as_value(y)
    if isinstance(y, Fraction) and y == 0:
        raise ValueError("the extended even step is undefined at 0")
    if not -1 < y < 1:
        raise ValueError(f"extended even step needs y in (-1, 1), got {y}")
    s = _sign_of(y)
    inv = 1 / abs(y)
    n = _integer_or_none(inv)
    if n is not None:
        if n % 2 == 1:
            raise BoundaryError(f"digit tie at reciprocal {n}")
        return Digit(n, s), inv - n
    m = math.floor(inv)
    b = m if m % 2 == 0 else m + 1
    return Digit(b, s), inv - b


# -- leading digits -----------------------------------------------------------


def ocf_leading(x: Value | int) -> tuple[Digit | None, Value]:
    """Split off the odd leading digit: x = a0 + eps0*y with y in [0, 1].

    The digit is the odd integer nearest x from the admissible side; numbers
    in (-1, 0) admit no such digit.  Values in [0, 1) pass through untouched.
    """
    x = _as_value(x)
    if x == 0:
        return None, Fraction(0)
    if 0 < x < 1:
        return None, x
    if -1 < x < 0:
        raise ValueError(f"no admissible odd leading digit for {x} in (-1, 0)")
    m = math.floor(x)
    if m % 2 == 1:
        digit = Digit(m, 1)
        y = x - m
    else:
        digit = Digit(m + 1, -1)
        y = (m + 1) - x
    if digit.a == -1 and y == 0:
        digit = Digit(-1, -1)
    if digit.a > 0:
        assert digit.a + digit.eps >= 2
    else:
        assert -digit.a - digit.eps >= 2
    return digit, y


def ecf_leading(x: Value | int) -> tuple[Digit | None, Value]:
    """Split off the even leading digit: x = a0 + eps0*y with y in [0, 1)."""
    x = _as_value(x)
    n = _integer_or_none(x)
    if n is not None and n % 2 == 1:
        raise BoundaryError(f"odd integer {n} has no even expansion")
    if x == 0:
        return None, Fraction(0)
    if 0 < x < 1:
        return None, x
    m = math.floor(x)
    if m % 2 == 0:
        return Digit(m, 1), x - m
    return Digit(m + 1, -1), (m + 1) - x


def rcf_leading(x: Value | int) -> tuple[Digit, Value]:
    """Split off the classical integer part; always present, possibly zero."""
    x = _as_value(x)
    m = math.floor(x)
    return Digit(m, 1), x - m


# -- expansion ----------------------------------------------------------------


def _digit_run(
    step: Callable[[Value], tuple[Digit, Value]],
    y: Value,
    max_depth: int,
) -> tuple[tuple[Digit, ...], tuple[Digit, ...], bool]:
    digits: list[Digit] = []
    seen: dict[Surd, int] = {}
    for _ in range(max_depth):
        if isinstance(y, Fraction):
            if y == 0:
                return tuple(digits), (), False
        else:
            idx = seen.get(y)
            if idx is not None:
                return tuple(digits[:idx]), tuple(digits[idx:]), False
            seen[y] = len(digits)
        d, y = step(y)
        digits.append(d)
    return tuple(digits), (), True


def ocf_expand(x: Value | int, max_depth: int = DEFAULT_MAX_DEPTH) -> DigitStream:
    """Odd expansion of a rational or real quadratic surd."""
    x = _as_value(x)
    leading, y = ocf_leading(x)
    pre, per, truncated = _digit_run(ocf_step, y, max_depth)
    return DigitStream("ocf", leading, pre, per, truncated)


def ecf_expand(x: Value | int, max_depth: int = DEFAULT_MAX_DEPTH) -> DigitStream:
    """Even expansion; odd integers are rejected as inexpandable."""
    x = _as_value(x)
    leading, y = ecf_leading(x)
    pre, per, truncated = _digit_run(ecf_step, y, max_depth)
    return DigitStream("ecf", leading, pre, per, truncated)


def rcf_expand(x: Value | int, max_depth: int = DEFAULT_MAX_DEPTH) -> DigitStream:
    """Classical expansion with the usual canonical finite form."""
    x = _as_value(x)
    leading, y = rcf_leading(x)
    pre, per, truncated = _digit_run(rcf_step, y, max_depth)
    return DigitStream("rcf", leading, pre, per, truncated)


def gcf_expand(y: Value | int, max_depth: int = DEFAULT_MAX_DEPTH) -> DigitStream:
    """Grotesque expansion of a nonzero point of the golden interval."""
    y = _as_value(y)
    if y == 0:
        raise ValueError("the grotesque expansion is undefined at 0")
    pre, per, truncated = _digit_run(gcf_step, y, max_depth)
    return DigitStream("gcf", None, pre, per, truncated)


def eecf_expand(y: Value | int, max_depth: int = DEFAULT_MAX_DEPTH) -> DigitStream:
    """Extended even expansion of a nonzero point of (-1, 1)."""
    y = _as_value(y)
    if y == 0:
        raise ValueError("the extended even expansion is undefined at 0")
    pre, per, truncated = _digit_run(eecf_step, y, max_depth)
    return DigitStream("eecf", None, pre, per, truncated)


# -- validation and evaluation ------------------------------------------------


def _check_eps(d: Digit) -> None:
    if d.eps not in (-1, 1):
        raise ValueError(f"sign must be +1 or -1, got {d.eps}")


def _check_leading(kind: str, d: Digit) -> None:
    _check_eps(d)
    if kind == "rcf":
        if d.eps != 1:
            raise ValueError("classical digits carry no sign")
    elif kind == "ocf":
        if d.a % 2 == 0:
            raise ValueError(f"odd leading digit required, got {d.a}")
        if d.a > 0 and d.a + d.eps < 2:
            raise ValueError(f"leading digit {tuple(d)} violates a + eps >= 2")
        if d.a < 0 and -d.a - d.eps < 2:
            raise ValueError(f"leading digit {tuple(d)} violates -a - eps >= 2")
    elif kind == "ecf":
        if d.a % 2 == 1:
            raise ValueError(f"even leading digit required, got {d.a}")
        if d.a == 0 and d.eps == 1:
            raise ValueError("leading (0, +1) is not canonical; drop the leading digit")
    else:
        raise ValueError(f"{kind} streams carry no leading digit")


def _check_fractional(kind: str, d: Digit, terminal: bool) -> None:
    _check_eps(d)
    if kind == "rcf":
        if d.a < 1:
            raise ValueError(f"classical digits are positive, got {d.a}")
        if d.eps != 1:
            raise ValueError("classical digits carry no sign")
        if terminal and d.a < 2:
            raise ValueError("a canonical finite classical stream cannot end in 1")
    elif kind in ("ocf", "gcf"):
        if d.a < 1 or d.a % 2 == 0:
            raise ValueError(f"{kind} digits are odd and positive, got {d.a}")
        if d.a + d.eps < 2:
            raise ValueError(f"digit {tuple(d)} violates a + eps >= 2")
    else:
        if d.a < 2 or d.a % 2 == 1:
            raise ValueError(f"{kind} digits are even and at least 2, got {d.a}")
    if terminal and kind in ("rcf", "ocf", "ecf") and d.eps != 1:
        raise ValueError("a finite stream ends with eps = +1")


def validate_stream(s: DigitStream) -> None:
    """Raise ValueError naming the first violated digit constraint."""
    if s.kind not in KINDS:
        raise ValueError(f"unknown stream kind {s.kind!r}")
    if s.truncated and s.period:
        raise ValueError("a truncated stream cannot carry a period")
    if s.leading is not None:
        _check_leading(s.kind, s.leading)
    digits = list(s.preperiod) + list(s.period)
    last = len(digits) - 1
    for i, d in enumerate(digits):
        terminal = s.is_finite and i == last
        _check_fractional(s.kind, d, terminal)


def _digit_matrix(kind: str, d: Digit) -> Mat2:
    if kind in ("rcf", "ocf", "ecf"):
        return Mat2(0, 1, d.eps, d.a)
    return Mat2(0, d.eps, 1, d.a)


def _domain_contains(kind: str, w: Surd) -> bool:
    if kind in ("rcf", "ocf", "ecf"):
        return 0 <= w <= 1
    if kind == "gcf":
        return _GOLDEN_LO <= w <= GOLDEN
    return -1 <= w <= 1


def _fixed_roots(m: Mat2) -> tuple[Surd, Surd]:
    """Both fixed points of a hyperbolic integer Mobius map, as exact surds."""
    if m.c == 0:
        raise ValueError("degenerate period: the fixed-point equation is linear")
    tr = m.a + m.d
    disc = tr * tr - 4 * m.det()
    if disc <= 0:
        raise ValueError("period matrix has no real fixed point")
    plus = Surd(m.a - m.d, 1, disc, 2 * m.c)
    minus = Surd(m.a - m.d, -1, disc, 2 * m.c)
    if plus.is_rational:
        raise ValueError("period matrix fixes a rational point")
    return plus, minus


def _periodic_value(kind: str, period: Sequence[Digit]) -> Surd:
    m = Mat2.identity()
    for d in period:
        m = m @ _digit_matrix(kind, d)
    roots = [w for w in _fixed_roots(m) if _domain_contains(kind, w)]
    if not roots:
        raise ValueError("no fixed point inside the digit domain")
    if len(roots) == 2:
        raise ValueError("both fixed points lie in the digit domain")
    return roots[0]


def cf_evaluate(s: DigitStream) -> Value:
    """Exact value of a stream: rational if finite, quadratic surd if periodic."""
    validate_stream(s)
    if s.truncated:
        raise ValueError("a truncated stream has no exact value")
    value: Value
    if s.period:
        value = _periodic_value(s.kind, s.period)
        if s.preperiod:
            m = Mat2.identity()
            for d in s.preperiod:
                m = m @ _digit_matrix(s.kind, d)
            value = m.apply(value)
    else:
        if not s.preperiod and s.leading is None:
            if s.kind in ("gcf", "eecf"):
                raise ValueError("an empty stream has no value in this system")
            return Fraction(0)
        acc: Value = Fraction(0)
        if s.kind in ("rcf", "ocf", "ecf"):
            for d in reversed(s.preperiod):
                acc = 1 / (d.a + d.eps * acc)
        else:
            for d in reversed(s.preperiod):
                acc = d.eps / (d.a + acc)
        value = acc
    if s.leading is not None:
        value = s.leading.a + s.leading.eps * value
    return value


def periodic_leading_value(period: Sequence[Digit], kind: str) -> Surd:
    """The value larger than 1 whose leading-form digit cycle is ``period``.

    Every digit acts at the integer level here: the value satisfies
    x = a1 + eps1/(a2 + eps2/(... + epsr/x)).
    """
    if kind not in ("ocf", "ecf"):
        raise ValueError(f"leading-form cycles exist for ocf and ecf, not {kind!r}")
    if not period:
        raise ValueError("empty cycle")
    for d in period:
        _check_eps(d)
        if kind == "ocf":
            if d.a < 1 or d.a % 2 == 0 or d.a + d.eps < 2:
                raise ValueError(f"inadmissible odd cycle digit {tuple(d)}")
        else:
            if d.a < 2 or d.a % 2 == 1:
                raise ValueError(f"inadmissible even cycle digit {tuple(d)}")
    m = Mat2.identity()
    for d in period:
        m = m @ Mat2(d.a, d.eps, 1, 0)
    roots = [w for w in _fixed_roots(m) if w > 1]
    if len(roots) != 1:
        raise ValueError("cycle has no unique fixed point above 1")
    return roots[0]


# -- natural extensions -------------------------------------------------------


@dataclass(frozen=True)
class ExtensionPoint:
    """A point of the two-sided shift domain: future x, past y, and a sign."""

    x: Surd
    y: Surd
    eps: int


def _require_point(p: ExtensionPoint, parity: str) -> None:
    for name, v in (("x", p.x), ("y", p.y)):
        if not isinstance(v, Surd) or v.is_rational:
            raise ValueError(f"{name} must be an irrational quadratic surd")
    if p.eps not in (-1, 1):
        raise ValueError(f"eps must be +1 or -1, got {p.eps}")
    if not 0 < p.x < 1:
        raise ValueError(f"x must lie in (0, 1), got {p.x}")
    if parity == "odd":
        if not _GOLDEN_LO < p.y < GOLDEN:
            raise ValueError(f"y must lie in the golden interval, got {p.y}")
    else:
        if not -1 < p.y < 1:
            raise ValueError(f"y must lie in (-1, 1), got {p.y}")


def natural_extension_odd(p: ExtensionPoint) -> ExtensionPoint:
    """Forward two-sided shift: push the first odd digit of x onto y."""
    _require_point(p, "odd")
    d, x2 = ocf_step(p.x)
    return ExtensionPoint(x2, d.eps / (d.a + p.y), -d.eps * p.eps)


def natural_extension_odd_inv(p: ExtensionPoint) -> ExtensionPoint:
    """Inverse two-sided shift: pull the first grotesque digit of y back onto x."""
    _require_point(p, "odd")
    d, tau = gcf_step(p.y)
    return ExtensionPoint(1 / (d.a + d.eps * p.x), tau, -d.eps * p.eps)


def natural_extension_even(p: ExtensionPoint) -> ExtensionPoint:
    """Forward two-sided shift for the even systems."""
    _require_point(p, "even")
    d, x2 = ecf_step(p.x)
    return ExtensionPoint(x2, d.eps / (d.a + p.y), -d.eps * p.eps)


def natural_extension_even_inv(p: ExtensionPoint) -> ExtensionPoint:
    """Inverse two-sided shift for the even systems."""
    _require_point(p, "even")
    d, tau = eecf_step(p.y)
    return ExtensionPoint(1 / (d.a + d.eps * p.x), tau, -d.eps * p.eps)


def inverse_via_rho(u: Surd, v: Surd) -> tuple[Surd, Surd]:
    """Inverse of the odd two-sided shift through the branch Mobius map.

    Independent route kept separate from ``natural_extension_odd_inv`` on
    purpose: with (b, s) the first grotesque digit of v and
    rho(w) = -s*b - 1/w, the preimage is (-s/rho(1/u), s*rho(-v)).
    """
    _require_point(ExtensionPoint(u, v, 1), "odd")
    d, _ = gcf_step(v)
    b, s = d.a, d.eps

    def rho(w: Surd) -> Surd:
        return -s * b - 1 / w

    return (-s) / rho(1 / u), s * rho(-v)


def inverse_via_rho_even(u: Surd, v: Surd) -> tuple[Surd, Surd]:
    """Even analogue of ``inverse_via_rho``, with the extended even digit of v."""
    _require_point(ExtensionPoint(u, v, 1), "even")
    d, _ = eecf_step(v)
    b, s = d.a, d.eps

    def rho(w: Surd) -> Surd:
        return -s * b - 1 / w

    return (-s) / rho(1 / u), s * rho(-v)


# -- tails --------------------------------------------------------------------


def tail_orbit(alpha: Surd, count: int, kind: str) -> list[tuple[Surd, Mat2]]:
    """Signed tails t_0 .. t_count of alpha > 1, each with its integer matrix.

    With digit sequence (a_1, eps_1), (a_2, eps_2), ... of alpha at the
    integer level and sigma_m the product of -eps_i for i <= m, the odd tail
    is sigma_m times the fractional bracket after m digits (t_0 = 1/alpha)
    and the even tail is sigma_m times the leading bracket (t_0 = alpha).
    Each pair satisfies t_m = A_m(alpha) with A_m in the matching group.
    """
    if kind not in ("ocf", "ecf"):
        raise ValueError(f"tails exist for ocf and ecf, not {kind!r}")
    if not isinstance(alpha, Surd) or alpha.is_rational:
        raise ValueError("tails need an irrational quadratic surd")
    if not alpha > 1:
        raise ValueError(f"tails need alpha > 1, got {alpha}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    odd = kind == "ocf"
    step = ocf_step if odd else ecf_step
    w = 1 / alpha
    sigma = 1
    mat = Mat2(0, 1, 1, 0) if odd else Mat2.identity()
    out: list[tuple[Surd, Mat2]] = [(w if odd else alpha, mat)]
    for _ in range(count):
        d, w = step(w)
        if odd:
            mat = Mat2(sigma * d.a, -1, 1, 0) @ mat
        else:
            mat = Mat2(0, 1, -1, sigma * d.a) @ mat
        sigma = -d.eps * sigma
        out.append((sigma * w if odd else sigma / w, mat))
    return out


def tail(alpha: Surd, m: int, kind: str) -> Surd:
    """The m-th signed tail of alpha > 1 in the odd or even system."""
    return tail_orbit(alpha, m, kind)[-1][0]


# -- reindexing ---------------------------------------------------------------


def eecf_to_ecf(s: DigitStream) -> tuple[int, DigitStream]:
    """Rewrite an extended even stream as a sign and an even fractional stream.

    The extended even bracket of (b_0, e_0), (b_1, e_1), ... equals
    e_0 times the even bracket of (b_0, e_1), (b_1, e_2), ...; for finite
    streams the final unpaired sign is canonically +1.
    """
    validate_stream(s)
    if s.kind != "eecf":
        raise ValueError(f"expected an eecf stream, got {s.kind!r}")
    if s.truncated:
        raise ValueError("cannot reindex a truncated stream")
    pre, per = s.preperiod, s.period
    if not pre and not per:
        raise ValueError("cannot reindex an empty stream")
    sign = pre[0].eps if pre else per[0].eps
    new_pre = []
    for i, d in enumerate(pre):
        if i + 1 < len(pre):
            nxt = pre[i + 1].eps
        elif per:
            nxt = per[0].eps
        else:
            nxt = 1
        new_pre.append(Digit(d.a, nxt))
    new_per = tuple(
        Digit(d.a, per[(i + 1) % len(per)].eps) for i, d in enumerate(per)
    )
    return sign, DigitStream("ecf", None, tuple(new_pre), new_per)
