"""Invariant measures, return times, geodesic lengths, and tail equivalence.

The digit shifts of cf.py preserve explicit densities: a finite pair on the
odd side (digit map on (0, 1), dual map on the golden interval) joined by
(1 + xy)^(-2) on their product, and an infinite analogue on the even side.
Masses come from closed-form antiderivatives, so invariance can be checked
to arbitrary precision by summing branch preimages; the infinite branch
families collapse to elementary logarithms once the two sign branches of
each denominator are paired.

A closed geodesic corresponds to a periodic digit sequence whose signs
compose to an orientation preserving word.  Its length is computed two
ways that must agree: an eigenvalue route through the trace of the period
matrix, and a product route through the exact periodic values of all
cyclic shifts and their duals.  The per-return contribution is the roof
function, the hyperbolic distance between consecutive section crossings.

Group equivalence of real numbers is decided through signed expansion
tails: two numbers above 1 lie in one orbit exactly when some pair of
their tails agree, and the witnessing matrix is assembled from the tail
matrices and verified before being returned.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from mpmath import mp

from ._precision import working_precision
from .cf import (
    Digit,
    DigitStream,
    cf_evaluate,
    ecf_expand,
    ocf_expand,
    periodic_leading_value,
    tail_orbit,
)
from .exact import GOLDEN, Mat2, Surd, classify_subgroup
from .geodesic import OrientedGeodesic, _leading, _on_section

__all__ = [
    "BirkhoffReport",
    "Equivalent",
    "InvarianceReport",
    "LengthReport",
    "NotWithinBound",
    "SYSTEMS",
    "birkhoff_average",
    "check_invariance",
    "closed_length",
    "equivalent",
    "measure_mass",
    "period_multiplicity",
    "purely_periodic_ecf",
    "purely_periodic_ocf",
    "roof",
]

SYSTEMS = (
    "odd_digit",
    "odd_dual",
    "odd_joint",
    "even_digit",
    "even_dual",
    "even_joint",
)

_INTERVAL_SYSTEMS = ("odd_digit", "odd_dual", "even_digit", "even_dual")
_JOINT_SYSTEMS = ("odd_joint", "even_joint")

Endpoint = Surd | Fraction | int


def _check_system(system: str) -> None:
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}, expected one of {SYSTEMS}")


def _num(v: Endpoint) -> mp.mpf:
    if isinstance(v, Surd):
        return v.to_mpf()
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    if isinstance(v, int):
        return mp.mpf(v)
    raise TypeError(f"endpoints must be exact (int, Fraction, or Surd), got {type(v).__name__}")


def _shifted(v: Endpoint, c: Endpoint) -> mp.mpf:
    """v + c at working precision, exactly when the two share a field."""
    try:
        return _num(v + c)
    except ValueError:
        return _num(v) + _num(c)


def _domain(system: str) -> tuple[Endpoint, Endpoint]:
    if system in ("odd_digit", "even_digit"):
        return 0, 1
    if system == "odd_dual":
        return GOLDEN - 2, GOLDEN
    return -1, 1


def _exact(v: Endpoint) -> Endpoint:
    # plain ints become Fractions so that 1 / (a + v) stays exact
    return Fraction(v) if isinstance(v, int) else v


def _interval(system: str, region: Sequence[Endpoint]) -> tuple[Endpoint, Endpoint]:
    if len(region) != 2:
        raise ValueError(f"{system} takes an interval (lo, hi), got {len(region)} endpoints")
    lo, hi = map(_exact, region)
    if not lo < hi:
        raise ValueError("interval endpoints must increase")
    dom_lo, dom_hi = _domain(system)
    if lo < dom_lo or hi > dom_hi:
        raise ValueError(f"interval lies outside the {system} domain")
    return lo, hi


def _rectangle(
    system: str, region: Sequence[Endpoint]
) -> tuple[Endpoint, Endpoint, Endpoint, Endpoint]:
    if len(region) != 4:
        raise ValueError(f"{system} takes a rectangle (x_lo, x_hi, y_lo, y_hi)")
    p, q, r, s = map(_exact, region)
    if not (p < q and r < s):
        raise ValueError("rectangle endpoints must increase")
    dual = "odd_dual" if system == "odd_joint" else "even_dual"
    lo, hi = _domain(dual)
    if p < 0 or q > 1 or r < lo or s > hi:
        raise ValueError(f"rectangle lies outside the {system} domain")
    return p, q, r, s


def _interval_mass(system: str, lo: Endpoint, hi: Endpoint) -> mp.mpf:
    if system == "odd_digit":
        # density 1/(u + G - 1) + 1/(G + 1 - u)
        return (
            mp.log(_shifted(hi, GOLDEN - 1))
            - mp.log(_shifted(lo, GOLDEN - 1))
            + mp.log(_shifted(-lo, GOLDEN + 1))
            - mp.log(_shifted(-hi, GOLDEN + 1))
        )
    if system == "even_digit":
        # density 1/(1 + u) + 1/(1 - u), infinite near 1
        return (
            mp.log(_shifted(hi, 1))
            - mp.log(_shifted(lo, 1))
            + mp.log(_shifted(-lo, 1))
            - mp.log(_shifted(-hi, 1))
        )
    # both dual densities are 1/(1 + v), infinite near -1 on the even side
    return mp.log(_shifted(hi, 1)) - mp.log(_shifted(lo, 1))


def _rect_mass(x_lo: Endpoint, x_hi: Endpoint, y_lo: Endpoint, y_hi: Endpoint) -> mp.mpf:
    # mass of (1 + xy)^(-2) dx dy over the rectangle
    p, q, r, s = _num(x_lo), _num(x_hi), _num(y_lo), _num(y_hi)
    return mp.log((1 + q * s) * (1 + p * r)) - mp.log((1 + q * r) * (1 + p * s))


def measure_mass(
    system: str,
    region: Sequence[Endpoint],
    normalized: bool = False,
    dps: int | None = None,
) -> mp.mpf:
    """Mass of an interval or rectangle under the system's invariant measure.

    Interval systems take (lo, hi) and joint systems take a rectangle
    (x_lo, x_hi, y_lo, y_hi), all with exact endpoints inside the closed
    domain.  Masses at an infinite edge of the even densities come out as
    mpmath infinities.  ``normalized`` divides by the finite odd total,
    three times log of the golden ratio, and rejects the even systems.
    """
    _check_system(system)
    if normalized and system.startswith("even"):
        raise ValueError("the even measures are infinite and cannot be normalized")
    with working_precision(dps):
        if system in _JOINT_SYSTEMS:
            mass = _rect_mass(*_rectangle(system, region))
        else:
            lo, hi = _interval(system, region)
            mass = _interval_mass(system, lo, hi)
        if normalized:
            mass /= 3 * mp.log(GOLDEN.to_mpf())
        return mass


# -- invariance under the shift maps ------------------------------------------


def _digit_branch_heads(system: str) -> tuple[int, int]:
    """First explicit denominator and the step between them."""
    return (3, 2) if system.startswith("odd") else (2, 2)


def _pullback_interval(system: str, lo: Endpoint, hi: Endpoint, branches: int) -> mp.mpf:
    """Mass of the full branch preimage: explicit families plus an exact tail.

    Pairing the two sign branches over a common denominator telescopes the
    infinite family, so the tail beyond the last explicit denominator is a
    single logarithm and the result does not depend on ``branches``.
    """
    first, step = _digit_branch_heads(system)
    total = mp.mpf(0)
    if system in ("odd_digit", "odd_dual"):
        # the lone unpaired branch is digit (1, +1)
        total += _interval_mass(system, 1 / (1 + hi), 1 / (1 + lo))

    digit_side = system.endswith("digit")
    a = first
    for _ in range(branches):
        total += _interval_mass(system, 1 / (a + hi), 1 / (a + lo))
        if digit_side:
            total += _interval_mass(system, 1 / (a - lo), 1 / (a - hi))
        else:
            total += _interval_mass(system, -1 / (a + lo), -1 / (a + hi))
        a += step

    # tail of the paired families from denominator a on, telescoped
    if system == "odd_digit":
        g = GOLDEN.to_mpf()
        p, q = _num(lo), _num(hi)
        total += mp.log((a + q + g - 2) * (a - p + g - 2)) - mp.log(
            (a + p + g - 2) * (a - q + g - 2)
        )
    elif system == "even_digit":
        p, q = _num(lo), _num(hi)
        total += mp.log((a + q - 1) * (a - p - 1)) - mp.log((a + p - 1) * (a - q - 1))
    else:
        c, d = _num(lo), _num(hi)
        total += mp.log(a + d - 1) - mp.log(a + c - 1)
    return total


def _dual_cells(system: str, r: Endpoint, s: Endpoint) -> Iterator[tuple[int, int, Fraction, Fraction]]:
    """Branches (a, eps) whose dual image overlaps (r, s), with the overlap.

    On the positive side the image of branch (a, +1) is a cell between
    1/(a + top) and 1/(a + bottom) where (bottom, top) bound the dual
    domain; cells accumulate at zero, so the interval must stay on one
    side of it.  Negative cells mirror under (a, -1).
    """
    odd = system == "odd_joint"
    bottom, top = (GOLDEN - 2, GOLDEN) if odd else (Fraction(-1), Fraction(1))
    first, step = _digit_branch_heads(system)
    if r < 0 < s:
        raise ValueError("the dual interval must stay on one side of zero, where the return branches accumulate")
    if s > 0:
        a = 1 if odd else first
        while True:
            cell_lo, cell_hi = 1 / (a + top), 1 / (a + bottom)
            if not cell_hi > r:
                return
            lo = cell_lo if cell_lo > r else r
            hi = cell_hi if cell_hi < s else s
            if lo < hi:
                yield a, 1, lo, hi
            a += step
    else:
        a = first
        while True:
            cell_lo, cell_hi = -1 / (a + bottom), -1 / (a + top)
            if not cell_lo < s:
                return
            lo = cell_lo if cell_lo > r else r
            hi = cell_hi if cell_hi < s else s
            if lo < hi:
                yield a, -1, lo, hi
            a += step


def _pullback_rect(system: str, region: Sequence[Endpoint]) -> mp.mpf:
    """Mass of the rectangle preimage under the two-sided shift.

    Only branches whose dual cell meets the y side contribute, so the
    preimage is a finite union of rectangles with exact corners.
    """
    p, q, r, s = _rectangle(system, region)
    total = mp.mpf(0)
    for a, eps, lo, hi in _dual_cells(system, r, s):
        if eps == 1:
            x_lo, x_hi = 1 / (a + q), 1 / (a + p)
            y_lo, y_hi = 1 / hi - a, 1 / lo - a
        else:
            x_lo, x_hi = 1 / (a - p), 1 / (a - q)
            y_lo, y_hi = -1 / lo - a, -1 / hi - a
        total += _rect_mass(x_lo, x_hi, y_lo, y_hi)
    return total


class InvarianceReport(NamedTuple):
    system: str
    mass: mp.mpf
    pulled_back: mp.mpf
    difference: mp.mpf
    tol: float
    passed: bool


def check_invariance(
    system: str,
    region: Sequence[Endpoint],
    tol: float = 1e-10,
    dps: int | None = None,
    branches: int = 40,
) -> InvarianceReport:
    """Compare the mass of a region with the mass of its shift preimage.

    The region must stay strictly away from the infinite edges of the even
    densities, and a rectangle's dual side must not straddle zero.  The
    ``branches`` knob only moves work between the explicit sum and the
    exact tail; the reported masses do not depend on it.
    """
    _check_system(system)
    with working_precision(dps):
        if system in _JOINT_SYSTEMS:
            mass = _rect_mass(*_rectangle(system, region))
            pulled = _pullback_rect(system, region)
        else:
            lo, hi = _interval(system, region)
            if system == "even_digit" and not hi < 1:
                raise ValueError("region touches the infinite edge of the even digit density")
            if system == "even_dual" and not lo > -1:
                raise ValueError("region touches the infinite edge of the even dual density")
            mass = _interval_mass(system, lo, hi)
            pulled = _pullback_interval(system, lo, hi, branches)
        difference = abs(mass - pulled)
        return InvarianceReport(system, mass, pulled, difference, tol, bool(difference <= tol))


# -- orbit averages ------------------------------------------------------------


class BirkhoffReport(NamedTuple):
    average: mp.mpf
    steps: int
    requested: int


def birkhoff_average(
    system: str,
    interval: Sequence[Endpoint],
    x0,
    n: int,
    dps: int = 100,
) -> BirkhoffReport:
    """Frequency of interval visits along a floating orbit of a finite system.

    Only the two finite odd systems average meaningfully.  The orbit runs
    at ``dps`` digits from any numeric seed; if it drifts onto a branch
    boundary the average covers the steps observed so far, reported in
    ``steps``.
    """
    if system not in ("odd_digit", "odd_dual"):
        raise ValueError("only the finite odd systems support orbit averages")
    if n < 1:
        raise ValueError("the orbit needs at least one step")
    lo, hi = _interval(system, interval)
    with working_precision(dps):
        left, right = _num(lo), _num(hi)
        golden = GOLDEN.to_mpf()
        dom_lo, dom_hi = (mp.mpf(0), mp.mpf(1)) if system == "odd_digit" else (golden - 2, golden)
        x = _num(x0) if isinstance(x0, (Surd, Fraction, int)) else mp.mpf(x0)
        if not dom_lo < x < dom_hi:
            raise ValueError(f"seed {mp.nstr(x, 12)} lies outside the {system} domain")
        hits = 0
        steps = 0
        for _ in range(n):
            if left <= x <= right:
                hits += 1
            steps += 1
            if system == "odd_digit":
                t = 1 / x
                a = int(mp.floor(t))
                if a % 2 == 0:
                    a += 1
                    x = a - t
                else:
                    x = t - a
            else:
                t = 1 / abs(x)
                b = 2 * int(mp.floor((t - golden + 1) / 2)) + 1
                x = t - b
            if not dom_lo < x < dom_hi:
                break
        return BirkhoffReport(mp.mpf(hits) / steps, steps, n)


# -- roof function -------------------------------------------------------------


def _return_data(x: Surd, parity: str) -> tuple[Mat2, int, int]:
    """Return matrix of the section step at forward endpoint x, with the
    signs of x and of its image."""
    if x > 1:
        m = Mat2(0, 1, -1, _leading(x, parity).a)
    else:
        m = Mat2(0, 1, -1, -_leading(-x, parity).a)
    return m, x.sign(), m.apply(x).sign()


def _roof_factor(t: Surd, m: Mat2, s_before: int, s_after: int) -> Surd:
    """The telescoping derivative factor m(t)^2 (t - s) / (m(t) - s')."""
    image = m.apply(t)
    return image * image * (t - s_before) / (image - s_after)


def roof(g: OrientedGeodesic, parity: str = "odd", dps: int | None = None) -> mp.mpf:
    """Hyperbolic distance to the next section crossing of a section geodesic.

    Computed as half the log ratio of the derivative factors at the two
    endpoints; the factors sit in the endpoint fields exactly and only the
    final logarithms are numeric.
    """
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be odd or even, got {parity!r}")
    if not _on_section(g, parity):
        raise ValueError(f"geodesic ({g.forward}, {g.backward}) is not on the {parity} section")
    m, s_before, s_after = _return_data(g.forward, parity)
    forward = _roof_factor(g.forward, m, s_before, s_after)
    backward = _roof_factor(g.backward, m, s_before, s_after)
    # the factor's sign is constant across the two endpoints, so the ratio
    # under the half log is positive
    if forward.sign() != backward.sign():
        raise RuntimeError(f"derivative factors disagree in sign at ({g.forward}, {g.backward})")
    with working_precision(dps):
        return (mp.log(abs(forward).to_mpf()) - mp.log(abs(backward).to_mpf())) / 2


# -- closed geodesic lengths ---------------------------------------------------


class LengthReport(NamedTuple):
    """Two independent lengths of one closed geodesic; they must agree."""

    length: mp.mpf
    via_trace: mp.mpf
    via_product: mp.mpf
    period: tuple[Digit, ...]
    kind: str
    multiplicity: int


def period_multiplicity(period: Sequence[Digit]) -> int:
    """How many times the period repeats its shortest orientation
    preserving unit; 1 means the closed geodesic is traversed once."""
    digits = tuple(Digit(*d) for d in period)
    n = len(digits)
    for unit_len in range(1, n + 1):
        if n % unit_len:
            continue
        unit = digits[:unit_len]
        sign = 1
        for d in unit:
            sign *= -d.eps
        if sign == 1 and unit * (n // unit_len) == digits:
            return n // unit_len
    raise ValueError("the digit signs compose to an orientation reversing word")


def closed_length(period: Sequence[Digit], kind: str, dps: int | None = None) -> LengthReport:
    """Length of the closed geodesic carried by a periodic digit sequence.

    The trace route reads the translation length off the period matrix.
    The product route sums, over all cyclic shifts, the log of the shift's
    periodic value minus the log of its reversed dual value; this equals
    half the log derivative ratio of the return map at the two fixed
    endpoints.  Both are reported and the trace is the stated length.
    """
    if kind not in ("ocf", "ecf"):
        raise ValueError(f"closed geodesics come from ocf or ecf cycles, not {kind!r}")
    digits = tuple(Digit(*d) for d in period)
    if not digits:
        raise ValueError("the period must contain at least one digit")
    for d in digits:
        if d.eps not in (-1, 1):
            raise ValueError(f"digit signs must be +-1, got {d.eps}")
    sign = 1
    matrix = Mat2.identity()
    for d in digits:
        sign *= -d.eps
        matrix = matrix @ Mat2(d.a, d.eps, 1, 0)
    if sign != 1:
        raise ValueError(
            "the digit signs compose to an orientation reversing word; "
            "double the period to close the geodesic"
        )
    membership = classify_subgroup(matrix)
    if not (membership.gamma_odd if kind == "ocf" else membership.theta):
        raise RuntimeError(f"period matrix {matrix} escapes the {kind} group")
    trace = abs(matrix.trace())
    if trace <= 2:
        raise ValueError(f"the period matrix is not hyperbolic (trace {matrix.trace()})")

    dual = "gcf" if kind == "ocf" else "eecf"
    with working_precision(dps):
        via_trace = 2 * mp.acosh(mp.mpf(trace) / 2)
        via_product = mp.mpf(0)
        for k in range(len(digits)):
            shift = digits[k:] + digits[:k]
            value = periodic_leading_value(shift, kind)
            partner = cf_evaluate(DigitStream(dual, None, (), tuple(reversed(shift))))
            via_product += mp.log(value.to_mpf()) - mp.log(abs(partner).to_mpf())
        return LengthReport(
            via_trace, via_trace, via_product, digits, kind, period_multiplicity(digits)
        )


# -- purely periodic expansions ------------------------------------------------


def _purely_periodic(alpha: Surd, kind: str) -> bool:
    if not isinstance(alpha, Surd) or alpha.is_rational:
        raise ValueError("pure periodicity applies to irrational quadratic surds")
    if not alpha > 1:
        raise ValueError(f"the expansion window sits above 1, got {alpha}")
    conj = alpha.conjugate()
    if kind == "ocf":
        # closed right edge: the golden square has conjugate exactly 2 - G
        window = -GOLDEN < conj <= 2 - GOLDEN
        stream = ocf_expand(alpha)
    else:
        window = -1 < conj < 1
        stream = ecf_expand(alpha)
    expanded = stream.purely_periodic_leading
    if window != expanded:
        raise RuntimeError(
            f"conjugate window and expansion disagree for {alpha}: "
            f"window {window}, expansion {expanded}"
        )
    if expanded:
        cycle = (stream.leading,) + stream.period[:-1]
        dual = "gcf" if kind == "ocf" else "eecf"
        partner = cf_evaluate(DigitStream(dual, None, (), tuple(reversed(cycle))))
        if partner != -conj:
            raise RuntimeError(f"reversed period of {alpha} does not evaluate to its conjugate")
    return expanded


def purely_periodic_ocf(alpha: Surd) -> bool:
    """Whether alpha > 1 repeats its odd expansion from the first digit.

    Decided by the conjugate window and cross-checked against the actual
    expansion; the reversed period must evaluate to minus the conjugate.
    """
    return _purely_periodic(alpha, "ocf")


def purely_periodic_ecf(alpha: Surd) -> bool:
    """Even counterpart of purely_periodic_ocf with window (-1, 1)."""
    return _purely_periodic(alpha, "ecf")


# -- group equivalence through tails -------------------------------------------


class Equivalent(NamedTuple):
    """Tail indices witnessing one group orbit, with the verified element."""

    r: int
    s: int
    witness: Mat2


class NotWithinBound(Exception):
    """No tail match within the searched depth; inconclusive for larger depths."""

    def __init__(self, depth_alpha: int, depth_beta: int) -> None:
        super().__init__(f"no equal tails within depths {depth_alpha} and {depth_beta}")
        self.depth_alpha = depth_alpha
        self.depth_beta = depth_beta


def _tail_depth(alpha: Surd, kind: str, bound: int | None) -> int:
    if bound is not None:
        return bound
    stream = ocf_expand(alpha) if kind == "ocf" else ecf_expand(alpha)
    if stream.truncated:
        return 64
    return 1 + len(stream.preperiod) + 2 * len(stream.period)


def equivalent(
    alpha: Surd,
    beta: Surd,
    group: str = "odd",
    depth_bound: int | None = None,
) -> Equivalent:
    """Find tail indices proving alpha and beta lie in one group orbit.

    Signed tails of the matching expansion are enumerated for both inputs
    up to a depth that covers a full period twice (or ``depth_bound``),
    and the first exact match assembles a witness matrix that is checked
    against both numbers and the group before being returned.  Raises
    NotWithinBound when no match exists within the searched depths.
    """
    if group not in ("odd", "even"):
        raise ValueError(f"group must be odd or even, got {group!r}")
    kind = "ocf" if group == "odd" else "ecf"
    depth_a = _tail_depth(alpha, kind, depth_bound)
    depth_b = _tail_depth(beta, kind, depth_bound)
    orbit_a = tail_orbit(alpha, depth_a, kind)
    orbit_b = tail_orbit(beta, depth_b, kind)
    first_seen: dict[Surd, tuple[int, Mat2]] = {}
    for s, (value, mat) in enumerate(orbit_b):
        if value not in first_seen:
            first_seen[value] = (s, mat)
    for r, (value, mat_a) in enumerate(orbit_a):
        hit = first_seen.get(value)
        if hit is None:
            continue
        s, mat_b = hit
        witness = (mat_b.inverse() @ mat_a).psl()
        if witness.apply(alpha) != beta:
            continue
        membership = classify_subgroup(witness)
        if membership.gamma_odd if group == "odd" else membership.theta:
            return Equivalent(r, s, witness)
    raise NotWithinBound(depth_a, depth_b)
