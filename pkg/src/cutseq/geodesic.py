"""Oriented geodesics, section return maps, and crossing words.

An oriented geodesic on the hyperbolic upper half plane is recorded by its
two ideal endpoints.  Two cross-sections of the geodesic flow matter here.
For the odd parity the section holds geodesics whose forward endpoint lies
beyond +-1 while the backward endpoint sits in a golden window coupled to
the forward sign; for the even parity the backward window is (-1, 1) for
either sign.  The first return to the section acts by an integer Mobius map
that consumes one leading digit of the forward endpoint, and conjugating by
a reciprocal change of coordinates turns the return map into the two-sided
digit shift of cf.py.

Between returns the geodesic crosses a block of sides of the Farey triangle
tessellation.  Each block spells a short word over sided letters, shaded in
the odd parity by the checkerboard colouring of the tessellation, and the
block shape is one of four templates indexed by a case letter A..D and a
depth k.  Words are emitted here segment by segment and parsed back into
digit streams, in both time directions.  Closed geodesics are built from
periodic digit data when the digit signs compose to an orientation
preserving word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cf import (
    Digit,
    DigitStream,
    ExtensionPoint,
    cf_evaluate,
    ecf_leading,
    eecf_step,
    gcf_step,
    natural_extension_even_inv,
    natural_extension_odd_inv,
    ocf_leading,
    periodic_leading_value,
    validate_stream,
)
from .exact import GOLDEN, Mat2, ROTATE_EVEN, ROTATE_ODD, Surd

__all__ = [
    "CaseTag",
    "Letter",
    "OrientedGeodesic",
    "REGROUPED_NOTE",
    "SHADE_CONVENTION",
    "case_digit",
    "case_word",
    "classify_case",
    "closed_geodesic_from_period",
    "cutting_sequence",
    "extension_to_section",
    "in_section",
    "lift_to_section",
    "parse_cutting_sequence",
    "return_step_even",
    "return_step_odd",
    "section_to_extension",
    "text_word",
    "word_text",
]

PARITIES = ("odd", "even")

REGROUPED_NOTE = "lookback-regrouped"

SHADE_CONVENTION = (
    "segment shades follow the case templates after lifting to the section; "
    "the base triangle with vertices -1, 0, infinity is light"
)

_G = GOLDEN
_CO_G = 2 - GOLDEN


class Letter(NamedTuple):
    """One tessellation crossing: exit side and shade of the crossed cell."""

    side: str
    shade: str


class CaseTag(NamedTuple):
    """Return case letter A..D together with its depth index k >= 1."""

    label: str
    k: int


_LIGHT_L = Letter("L", "light")
_DARK_L = Letter("L", "dark")
_LIGHT_R = Letter("R", "light")
_DARK_R = Letter("R", "dark")
_PLAIN_L = Letter("L", "unshaded")
_PLAIN_R = Letter("R", "unshaded")

Word = tuple[Letter, ...]


@dataclass(frozen=True)
class OrientedGeodesic:
    """A directed geodesic: the ideal endpoint ahead and the one behind."""

    forward: Surd | Fraction
    backward: Surd | Fraction

    def __post_init__(self) -> None:
        if self.forward == self.backward:
            raise ValueError("a geodesic needs two distinct ideal endpoints")

    def reverse(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.backward, self.forward)

    def transform(self, m: Mat2) -> "OrientedGeodesic":
        """Image under a Mobius map, applied to both endpoints."""
        return OrientedGeodesic(m.apply(self.forward), m.apply(self.backward))


def _check_parity(parity: str) -> None:
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}, got {parity!r}")


def _irrational(v: object) -> bool:
    return isinstance(v, Surd) and not v.is_rational


# -- the section --------------------------------------------------------------


def in_section(g: OrientedGeodesic, parity: str) -> bool:
    """Exact membership in the open flow section of the given parity.

    Both endpoints must be irrational quadratic surds; rational endpoints
    belong to geodesics that run into a cusp and never return.
    """
    _check_parity(parity)
    x, y = g.forward, g.backward
    if not (_irrational(x) and _irrational(y)):
        return False
    if parity == "even":
        return (x > 1 or x < -1) and -1 < y < 1
    if x > 1:
        return -_G < y < _CO_G
    if x < -1:
        return _G - 2 < y < _G
    return False


def _on_section(g: OrientedGeodesic, parity: str) -> bool:
    # Closed golden window: periodic orbits through the window edge, such as
    # the fixed pair of the squared golden ratio, must stay steppable.
    x, y = g.forward, g.backward
    if not (_irrational(x) and _irrational(y)):
        return False
    if parity == "even":
        return (x > 1 or x < -1) and -1 < y < 1
    if x > 1:
        return -_G <= y <= _CO_G
    if x < -1:
        return _G - 2 <= y <= _G
    return False


# -- cases, digits, words ------------------------------------------------------


def _leading(x: Surd, parity: str) -> Digit:
    d, _ = (ocf_leading if parity == "odd" else ecf_leading)(x)
    assert d is not None
    return d


def _forward_tag(d: Digit, negative: bool, parity: str) -> CaseTag:
    if parity == "odd":
        k = (d.a - 1) // 2 if d.eps == -1 else (d.a + 1) // 2
    else:
        k = d.a // 2
    if d.eps == -1:
        return CaseTag("C" if negative else "A", k)
    return CaseTag("D" if negative else "B", k)


def classify_case(x: Surd, parity: str) -> CaseTag:
    """Return case of a forward endpoint: letter from signs, k from size.

    Positive endpoints fall in A (digit sign -1) or B (digit sign +1), their
    mirror images in C or D.  Values inside [-1, 1] have no case.
    """
    _check_parity(parity)
    if not _irrational(x):
        raise ValueError(f"forward endpoint must be an irrational surd, got {x}")
    if x > 1:
        return _forward_tag(_leading(x, parity), False, parity)
    if x < -1:
        return _forward_tag(_leading(-x, parity), True, parity)
    raise ValueError(f"no return case for forward endpoint {x} inside [-1, 1]")


# Reading the past regroups letters under mirrored premises, so the same
# template carries a different case letter there.  The maps give, for each
# direction, the label a group takes from its underlying forward shape.
_BACKWARD_LABEL = {
    "odd": {"A": "A", "B": "D", "C": "C", "D": "B"},
    "even": {"A": "A", "B": "C", "C": "D", "D": "B"},
}
_FORWARD_SHAPE = {
    parity: {back: fwd for fwd, back in table.items()}
    for parity, table in _BACKWARD_LABEL.items()
}


def _check_tag(tag: CaseTag) -> None:
    if tag.label not in "ABCD":
        raise ValueError(f"unknown case label {tag.label!r}")
    if tag.k < 1:
        raise ValueError(f"case depth must be at least 1, got {tag.k}")


def _shape_of(tag: CaseTag, parity: str, direction: str) -> CaseTag:
    _check_parity(parity)
    _check_tag(tag)
    if direction == "forward":
        return tag
    if direction != "backward":
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    return CaseTag(_FORWARD_SHAPE[parity][tag.label], tag.k)


def case_digit(tag: CaseTag, parity: str, direction: str = "forward") -> Digit:
    """Digit the tagged return contributes to its endpoint's expansion.

    Forward tags feed the leading expansion of the forward endpoint,
    backward tags the dual expansion of the folded backward one.
    """
    shape = _shape_of(tag, parity, direction)
    if parity == "odd":
        a = 2 * shape.k + 1 if shape.label in "AC" else 2 * shape.k - 1
    else:
        a = 2 * shape.k
    return Digit(a, -1 if shape.label in "AC" else 1)


def case_word(tag: CaseTag, parity: str, direction: str = "forward") -> Word:
    """Crossing template of a return case.

    Odd templates alternate shades and are pinned by the case: the shapes
    for positive forward endpoints start light on the left side, their
    mirrors start dark on the right.  Even templates are a run of one side
    closed by a single opposite letter, unshaded.
    """
    shape = _shape_of(tag, parity, direction)
    k = shape.k
    if parity == "even":
        if shape.label == "A":
            return (_PLAIN_L,) * (2 * k - 2) + (_PLAIN_R,)
        if shape.label == "B":
            return (_PLAIN_L,) * (2 * k - 1) + (_PLAIN_R,)
        if shape.label == "C":
            return (_PLAIN_R,) * (2 * k - 2) + (_PLAIN_L,)
        return (_PLAIN_R,) * (2 * k - 1) + (_PLAIN_L,)
    if shape.label == "A":
        return (_LIGHT_L, _DARK_L) * (k - 1) + (_LIGHT_L, _DARK_R)
    if shape.label == "B":
        return (_LIGHT_L, _DARK_L) * (k - 1) + (_LIGHT_R,)
    if shape.label == "C":
        return (_DARK_R, _LIGHT_R) * (k - 1) + (_DARK_R, _LIGHT_L)
    return (_DARK_R, _LIGHT_R) * (k - 1) + (_DARK_L,)


def word_text(word: Sequence[Letter]) -> str:
    """Compact text rendering: lowercase is light, uppercase dark or unshaded."""
    out = []
    for t in word:
        if t.side not in ("L", "R") or t.shade not in ("light", "dark", "unshaded"):
            raise ValueError(f"not a crossing letter: {t!r}")
        out.append(t.side.lower() if t.shade == "light" else t.side)
    return "".join(out)


def text_word(text: str, parity: str) -> Word:
    """Letters from compact text; shades are implied by the parity."""
    _check_parity(parity)
    out = []
    for i, ch in enumerate(text):
        if ch in "LR":
            out.append(Letter(ch, "dark" if parity == "odd" else "unshaded"))
        elif ch in "lr" and parity == "odd":
            out.append(Letter(ch.upper(), "light"))
        else:
            raise ValueError(f"bad letter {ch!r} at position {i} for {parity} parity")
    return tuple(out)


def _check_letters(word: Sequence[Letter], parity: str) -> None:
    wanted = ("light", "dark") if parity == "odd" else ("unshaded",)
    for i, t in enumerate(word):
        if t.side not in ("L", "R") or t.shade not in wanted:
            raise ValueError(f"bad letter {t!r} at position {i} for {parity} parity")


# -- return maps ---------------------------------------------------------------


def _return_step(g: OrientedGeodesic, parity: str) -> tuple[OrientedGeodesic, CaseTag, Word]:
    if not _on_section(g, parity):
        raise ValueError(f"geodesic ({g.forward}, {g.backward}) is not on the {parity} section")
    x = g.forward
    if x > 1:
        d = _leading(x, parity)
        m = Mat2(0, 1, -1, d.a)
        tag = _forward_tag(d, False, parity)
    else:
        d = _leading(-x, parity)
        m = Mat2(0, 1, -1, -d.a)
        tag = _forward_tag(d, True, parity)
    out = g.transform(m)
    assert _on_section(out, parity)
    return out, tag, case_word(tag, parity)


def return_step_odd(g: OrientedGeodesic) -> tuple[OrientedGeodesic, CaseTag, Word]:
    """One first-return of the odd section: (next geodesic, case, word).

    With (a, e) the leading odd digit of the forward endpoint's magnitude,
    both endpoints move by w -> 1/(a - w) for a positive forward endpoint and
    w -> 1/(-a - w) for a negative one.  The new forward sign is the old one
    times -e.  Window-edge orbits are admitted although the open section
    predicate excludes them.
    """
    return _return_step(g, "odd")


def return_step_even(g: OrientedGeodesic) -> tuple[OrientedGeodesic, CaseTag, Word]:
    """One first-return of the even section; same Mobius rule, even digits."""
    return _return_step(g, "even")


# -- conjugation with the two-sided shift ---------------------------------------


def section_to_extension(g: OrientedGeodesic, parity: str) -> ExtensionPoint:
    """Coordinates of a section geodesic on the two-sided shift domain.

    The forward endpoint folds to its reciprocal magnitude in (0, 1), the
    backward endpoint flips sign with the forward one, and the sign slot
    records which half of the section the geodesic came from.  The change of
    coordinates intertwines the return map with the forward shift exactly.
    """
    if not _on_section(g, parity):
        raise ValueError(f"geodesic ({g.forward}, {g.backward}) is not on the {parity} section")
    x, y = g.forward, g.backward
    if x > 1:
        return ExtensionPoint(1 / x, -y, 1)
    return ExtensionPoint(-1 / x, y, -1)


def extension_to_section(p: ExtensionPoint, parity: str) -> OrientedGeodesic:
    """Inverse change of coordinates, back to a section geodesic."""
    _check_parity(parity)
    if p.eps not in (-1, 1):
        raise ValueError(f"sign slot must be +-1, got {p.eps}")
    for name, v in (("x", p.x), ("y", p.y)):
        if not _irrational(v):
            raise ValueError(f"{name} must be an irrational quadratic surd, got {v}")
    if not 0 < p.x < 1:
        raise ValueError(f"x must lie in (0, 1), got {p.x}")
    lo, hi = (_G - 2, _G) if parity == "odd" else (-1, 1)
    if not lo <= p.y <= hi:
        raise ValueError(f"y lies outside the {parity} window: {p.y}")
    if p.eps == 1:
        return OrientedGeodesic(1 / p.x, -p.y)
    return OrientedGeodesic(-1 / p.x, p.y)


# -- lifting -------------------------------------------------------------------


_ROTATE_ODD_SQ = (ROTATE_ODD @ ROTATE_ODD).psl()


def lift_to_section(
    g: OrientedGeodesic, parity: str, max_moves: int = 64
) -> tuple[Mat2, OrientedGeodesic]:
    """Carry a geodesic onto its section by an element of the parity group.

    The forward endpoint is first pushed out of [-1, 1] by a single group
    rotation if needed.  From there the digit-driven return matrices are
    walked: they keep the forward endpoint beyond +-1 and contract the
    backward endpoint into the window at dual continued fraction speed,
    with every containment check exact.  Returns the matrix and the moved
    geodesic.  Raises for rational endpoints, and when the window is not
    reached within ``max_moves`` matrix moves, which happens only for
    backward orbits that converge to the window edge without reaching it.
    """
    _check_parity(parity)
    for v in (g.forward, g.backward):
        if not _irrational(v):
            raise ValueError(f"cannot lift: endpoint {v} is not an irrational surd")
    m = Mat2.identity()
    cur = g
    moves = 0

    def advance(step: Mat2) -> None:
        nonlocal m, cur, moves
        m = step @ m
        cur = cur.transform(step)
        moves += 1

    if _on_section(cur, parity):
        return m, cur
    x = cur.forward
    if -1 < x < 1:
        if parity == "even":
            advance(ROTATE_EVEN)
        else:
            advance(ROTATE_ODD if x < 0 else _ROTATE_ODD_SQ)
    while moves <= max_moves:
        if _on_section(cur, parity):
            return m, cur
        x = cur.forward
        if x > 1:
            advance(Mat2(0, 1, -1, _leading(x, parity).a))
        else:
            advance(Mat2(0, 1, -1, -_leading(-x, parity).a))
    raise ValueError(f"not lifted within depth {max_moves}")


# -- emission ------------------------------------------------------------------


def cutting_sequence(
    g: OrientedGeodesic, n_segments: int, parity: str, direction: str = "forward"
) -> list[tuple[CaseTag, Word]]:
    """Tags and words of successive section returns.

    Forward segments describe the future returns in flow order.  Backward
    segments describe past returns nearest first; each backward word sits to
    the left of the previous one in the full crossing string, and its tag
    carries the backward case label of the re-read grouping.  A geodesic off
    the section is lifted first.
    """
    _check_parity(parity)
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    if n_segments < 0:
        raise ValueError("segment count must be nonnegative")
    if not _on_section(g, parity):
        _, g = lift_to_section(g, parity)
    out: list[tuple[CaseTag, Word]] = []
    if direction == "forward":
        for _ in range(n_segments):
            g, tag, word = _return_step(g, parity)
            out.append((tag, word))
        return out
    p = section_to_extension(g, parity)
    pull = gcf_step if parity == "odd" else eecf_step
    back = natural_extension_odd_inv if parity == "odd" else natural_extension_even_inv
    relabel = _BACKWARD_LABEL[parity]
    for _ in range(n_segments):
        d, _ = pull(p.y)
        p = back(p)
        shape = _forward_tag(d, p.eps == -1, parity)
        out.append((CaseTag(relabel[shape.label], shape.k), case_word(shape, parity)))
    return out


# -- parsing -------------------------------------------------------------------


_SUCC = {"A": ("A", "B"), "B": ("C", "D"), "C": ("C", "D"), "D": ("A", "B")}
_PRED = {"A": ("A", "D"), "B": ("A", "D"), "C": ("B", "C"), "D": ("B", "C")}


def _parse_error(pos: int) -> ValueError:
    return ValueError(f"word does not decompose into return segments at letter {pos}")


def _segment_forward_odd(w: Word, first: tuple[str, ...] | None) -> list[CaseTag]:
    shapes: list[CaseTag] = []
    i, n = 0, len(w)
    while i < n:
        start = i
        if w[i] in (_LIGHT_L, _LIGHT_R):
            j = i
            while j + 1 < n and w[j] == _LIGHT_L and w[j + 1] == _DARK_L:
                j += 2
            if j < n and w[j] == _LIGHT_R:
                label, j = "B", j + 1
            elif j + 1 < n and w[j] == _LIGHT_L and w[j + 1] == _DARK_R:
                label, j = "A", j + 2
            else:
                raise _parse_error(min(j, n - 1))
        else:
            j = i
            while j + 1 < n and w[j] == _DARK_R and w[j + 1] == _LIGHT_R:
                j += 2
            if j < n and w[j] == _DARK_L:
                label, j = "D", j + 1
            elif j + 1 < n and w[j] == _DARK_R and w[j + 1] == _LIGHT_L:
                label, j = "C", j + 2
            else:
                raise _parse_error(min(j, n - 1))
        k = (j - start + 1) // 2
        if shapes and label not in _SUCC[shapes[-1].label]:
            raise _parse_error(start)
        if not shapes and first is not None and label not in first:
            raise _parse_error(start)
        shapes.append(CaseTag(label, k))
        i = j
    return shapes


def _even_label(closer_side: str, body: int) -> tuple[str, int]:
    k = (body + 2) // 2 if body % 2 == 0 else (body + 1) // 2
    if closer_side == "R":
        return ("A" if body % 2 == 0 else "B"), k
    return ("C" if body % 2 == 0 else "D"), k


def _segment_forward_even(
    w: Word, first: tuple[str, ...] | None
) -> tuple[list[CaseTag], bool]:
    sides = [t.side for t in w]
    n = len(w)
    memo: dict[tuple[int, tuple[str, ...] | None], list[CaseTag] | None] = {}
    regrouped = False
    deepest = 0

    def rec(i: int, allowed: tuple[str, ...] | None) -> list[CaseTag] | None:
        nonlocal regrouped, deepest
        if i == n:
            return []
        key = (i, allowed)
        if key in memo:
            return memo[key]
        deepest = max(deepest, i)
        cands: list[tuple[str, int, int]] = []
        j = i
        while j < n and sides[j] == sides[i]:
            j += 1
        if j < n:
            label, k = _even_label(sides[j], j - i)
            cands.append((label, k, j + 1))
        bare_label, bare_k = _even_label(sides[i], 0)
        cands.append((bare_label, bare_k, i + 1))
        for pos, (label, k, nxt) in enumerate(cands):
            if allowed is not None and label not in allowed:
                continue
            sub = rec(nxt, _SUCC[label])
            if sub is not None:
                if pos > 0:
                    regrouped = True
                memo[key] = [CaseTag(label, k)] + sub
                return memo[key]
        memo[key] = None
        return None

    res = rec(0, first)
    if res is None:
        raise _parse_error(deepest)
    return res, regrouped


def _segment_backward_odd(
    w: Word, first: tuple[str, ...] | None
) -> tuple[list[CaseTag], bool]:
    n = len(w)
    ender = {_DARK_R: "A", _LIGHT_R: "B", _LIGHT_L: "C", _DARK_L: "D"}
    pair = {"A": (_DARK_L, _LIGHT_L), "B": (_DARK_L, _LIGHT_L), "C": (_LIGHT_R, _DARK_R), "D": (_LIGHT_R, _DARK_R)}
    memo: dict[tuple[int, tuple[str, ...] | None], list[CaseTag] | None] = {}
    regrouped = False
    shallow = n

    def rec(e: int, allowed: tuple[str, ...] | None) -> list[CaseTag] | None:
        nonlocal regrouped, shallow
        if e == -1:
            return []
        key = (e, allowed)
        if key in memo:
            return memo[key]
        shallow = min(shallow, e)
        label = ender[w[e]]
        if allowed is not None and label not in allowed:
            memo[key] = None
            return None
        if label in ("A", "C"):
            mate = _LIGHT_L if label == "A" else _DARK_R
            if e < 1 or w[e - 1] != mate:
                memo[key] = None
                return None
            base = 2
        else:
            base = 1
        first, second = pair[label]
        pairs = 0
        while e - base - 2 * pairs >= 1 and w[e - base - 2 * pairs] == first and w[e - base - 2 * pairs - 1] == second:
            pairs += 1
        for k in range(pairs + 1, 0, -1):
            start = e - base - 2 * (k - 1) + 1
            sub = rec(start - 1, _PRED[label])
            if sub is not None:
                if k < pairs + 1:
                    regrouped = True
                memo[key] = [CaseTag(label, k)] + sub
                return memo[key]
        memo[key] = None
        return None

    res = rec(n - 1, first)
    if res is None:
        raise _parse_error(shallow)
    return res, regrouped


def _segment_backward_even(
    w: Word, first: tuple[str, ...] | None
) -> tuple[list[CaseTag], bool]:
    sides = [t.side for t in w]
    n = len(w)
    memo: dict[tuple[int, tuple[str, ...] | None], list[CaseTag] | None] = {}
    regrouped = False
    shallow = n

    def rec(e: int, allowed: tuple[str, ...] | None) -> list[CaseTag] | None:
        nonlocal regrouped, shallow
        if e == -1:
            return []
        key = (e, allowed)
        if key in memo:
            return memo[key]
        shallow = min(shallow, e)
        closer = sides[e]
        body_side = "L" if closer == "R" else "R"
        avail = 0
        while e - 1 - avail >= 0 and sides[e - 1 - avail] == body_side:
            avail += 1
        for body in range(avail, -1, -1):
            label, k = _even_label(closer, body)
            if allowed is not None and label not in allowed:
                continue
            sub = rec(e - body - 1, _PRED[label])
            if sub is not None:
                if body < avail:
                    regrouped = True
                memo[key] = [CaseTag(label, k)] + sub
                return memo[key]
        memo[key] = None
        return None

    res = rec(n - 1, first)
    if res is None:
        raise _parse_error(shallow)
    return res, regrouped


def parse_cutting_sequence(
    word: str | Sequence[Letter],
    direction: str,
    parity: str,
    forward_sign: int | None = None,
) -> DigitStream:
    """Digits encoded by a crossing word.

    Forward words yield the leading-form expansion of the forward endpoint,
    a truncated stream of kind ocf or ecf whose leading digit is negated
    when the word opens with a mirror case C or D.  Backward words are read
    right to left, nearest group first, and yield the dual expansion of the
    folded backward coordinate as a truncated gcf or eecf stream.  A parse
    that had to shrink a greedy segment while regrouping records a note.
    Words that do not decompose raise with the offending letter position.

    Even words admit a mirror reading: the same letters describe a geodesic
    on either side of the section, with different digits.  Passing the sign
    of the present forward endpoint as ``forward_sign`` pins the reading;
    without it the greedy decomposition is returned.  Odd shades pin the
    reading on their own and the sign then only acts as a cross-check.
    """
    _check_parity(parity)
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    if forward_sign not in (None, 1, -1):
        raise ValueError(f"forward_sign must be +-1 or None, got {forward_sign}")
    letters = text_word(word, parity) if isinstance(word, str) else tuple(word)
    _check_letters(letters, parity)
    if not letters:
        raise ValueError("empty crossing word")
    first: tuple[str, ...] | None = None
    if forward_sign is not None:
        if direction == "forward":
            first = ("A", "B") if forward_sign == 1 else ("C", "D")
        else:
            first = ("A", "D") if forward_sign == 1 else ("B", "C")
    regrouped = False
    if direction == "forward":
        if parity == "odd":
            shapes = _segment_forward_odd(letters, first)
        else:
            shapes, regrouped = _segment_forward_even(letters, first)
        digits = [case_digit(s, parity) for s in shapes]
        lead = digits[0]
        if shapes[0].label in "CD":
            lead = Digit(-lead.a, -lead.eps)
        stream = DigitStream(
            "ocf" if parity == "odd" else "ecf",
            lead,
            tuple(digits[1:]),
            (),
            truncated=True,
            notes=(REGROUPED_NOTE,) if regrouped else (),
        )
    else:
        if parity == "odd":
            shapes, regrouped = _segment_backward_odd(letters, first)
        else:
            shapes, regrouped = _segment_backward_even(letters, first)
        digits = [case_digit(s, parity) for s in shapes]
        stream = DigitStream(
            "gcf" if parity == "odd" else "eecf",
            None,
            tuple(digits),
            (),
            truncated=True,
            notes=(REGROUPED_NOTE,) if regrouped else (),
        )
    validate_stream(stream)
    return stream


# -- closed geodesics ----------------------------------------------------------


def closed_geodesic_from_period(
    period: Sequence[Digit | tuple[int, int]], kind: str, eps: int = 1
) -> OrientedGeodesic:
    """Axis of the hyperbolic map given by a periodic leading-form cycle.

    The forward endpoint is eps times the value larger than one whose
    leading digit cycle is ``period``; the backward endpoint is minus eps
    times the dual value of the reversed cycle.  The digit signs must
    compose to an orientation preserving word, otherwise the period only
    closes up after doubling and a ValueError says so.
    """
    if kind not in ("ocf", "ecf"):
        raise ValueError(f"closed geodesics come from ocf or ecf cycles, not {kind!r}")
    if eps not in (-1, 1):
        raise ValueError(f"eps must be +-1, got {eps}")
    digits = tuple(d if isinstance(d, Digit) else Digit(*d) for d in period)
    sign = 1
    for d in digits:
        sign *= -d.eps
    if sign != 1:
        raise ValueError(
            "the digit signs compose to an orientation reversing word; "
            "double the period to close the geodesic"
        )
    alpha = periodic_leading_value(digits, kind)
    dual_kind = "gcf" if kind == "ocf" else "eecf"
    dual = cf_evaluate(DigitStream(dual_kind, None, (), tuple(reversed(digits))))
    if eps == 1:
        return OrientedGeodesic(alpha, -dual)
    return OrientedGeodesic(-alpha, dual)
