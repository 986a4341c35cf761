"""Rewriting classical partial quotients into the odd, even, and grotesque systems.

The converters work on digit streams, never on real numbers.  Each one scans
the classical quotients left to right and applies the insertion identity
``a + e/(1 + 1/(b + z)) = a + e - e/(b + 1 + z)`` wherever the target system
forbids the quotient as written.  Because the rewriter only ever remembers a
couple of pending quotients, a periodic input drives it through finitely many
states; the output period is recovered by watching for a repeated state at
input cycle boundaries and then normalizing to the shortest, earliest period.
On every value the target system expands greedily without hitting a branch
tie, the rewritten stream coincides digit for digit with the greedy
expansion.  The odd rewriter is actually stronger: it resolves the rational
branch ties that make ``ocf_expand`` raise, while still preserving the value.

The grotesque rewriter is the one place where a single quotient does not
decide the digit: an even quotient rounds up or down according to whether the
remaining tail exceeds the golden ratio, which may require peeking past a run
of ones.  Inputs that needed a peek deeper than the next quotient are flagged
with a note on the output stream, and a tail of ones forever is a genuine
tie, reported the same way the step map reports it.
"""

from __future__ import annotations

from dataclasses import replace

from .cf import BoundaryError, Digit, DigitStream, validate_stream

__all__ = [
    "DEEP_LOOKBACK_NOTE",
    "rcf_to_ecf",
    "rcf_to_gcf",
    "rcf_to_ocf",
]

DEEP_LOOKBACK_NOTE = "regrouped with lookback past the next quotient"

_SYNC_CAP = 1_000_000


class _Quotients:
    """Partial-quotient supply with pushback and cycle-position tracking."""

    def __init__(self, stream: DigitStream) -> None:
        self._head = [d.a for d in stream.preperiod]
        self._cycle = [d.a for d in stream.period]
        self._pos = 0
        self.pending: list[int] = []

    def pull(self) -> int | None:
        if self.pending:
            return self.pending.pop(0)
        q = self._at(self._pos)
        if q is not None:
            self._pos += 1
        return q

    def push(self, *values: int) -> None:
        self.pending[:0] = values

    def peek(self, offset: int = 0) -> int | None:
        if offset < len(self.pending):
            return self.pending[offset]
        return self._at(self._pos + offset - len(self.pending))

    def lookahead_bound(self) -> int:
        # past this offset every peek lands on an already-seen cycle entry
        ahead = len(self.pending) + max(0, len(self._head) - self._pos)
        return ahead + len(self._cycle)

    def snapshot(self) -> tuple | None:
        """Hashable rewriter position, or None while the preperiod is live."""
        if not self._cycle or self._pos < len(self._head):
            return None
        return (tuple(self.pending), (self._pos - len(self._head)) % len(self._cycle))

    def _at(self, index: int) -> int | None:
        if index < len(self._head):
            return self._head[index]
        if not self._cycle:
            return None
        return self._cycle[(index - len(self._head)) % len(self._cycle)]


def _check_input(d: DigitStream) -> None:
    if d.kind != "rcf":
        raise ValueError(f"expected an rcf stream, got {d.kind!r}")
    if d.truncated:
        raise ValueError("cannot convert a truncated stream")
    validate_stream(d)
    if d.leading.a < 0:
        raise ValueError("negative values are out of scope for conversion")


def _canonical(digits: list[Digit], cut: int | None) -> tuple[tuple[Digit, ...], tuple[Digit, ...]]:
    """Split at ``cut`` and normalize to the shortest, earliest-aligned period."""
    if cut is None:
        return tuple(digits), ()
    pre, per = digits[:cut], digits[cut:]
    n = len(per)
    for width in range(1, n + 1):
        if n % width == 0 and per == per[:width] * (n // width):
            per = per[:width]
            break
    while pre and pre[-1] == per[-1]:
        per = [per[-1]] + per[:-1]
        pre = pre[:-1]
    return tuple(pre), tuple(per)


def _insert_one(src: _Quotients) -> None:
    """Push quotients for ``1 + 1/(v - 1)`` where ``v`` is the next tail value."""
    t = src.pull()
    if t is None:
        src.push(1)
    elif t == 1:
        u = src.pull()
        assert u is not None, "canonical streams cannot end in 1"
        src.push(u + 1)
    else:
        src.push(1, t - 1)


def rcf_to_ocf(d: DigitStream) -> DigitStream:
    """Rewrite a classical stream as an odd stream with the same value.

    Odd quotients pass through; an even quotient ``m`` becomes ``m + 1``
    carrying a minus sign, with the surplus pushed back as inserted
    quotients.  Streams whose greedy odd expansion stalls on a branch tie
    (only certain rationals do) still convert, so the result is checked
    against the value rather than against ``ocf_expand`` for those.
    """
    _check_input(d)
    src = _Quotients(d)
    lead = d.leading.a
    leading = None
    if lead == 0:
        if src.peek() is None:
            raise ValueError("conversion needs a positive value")
    elif lead % 2 == 1:
        leading = Digit(lead, 1)
    else:
        leading = Digit(lead + 1, -1)
        _insert_one(src)

    out: list[Digit] = []
    seen: dict = {}
    cut = None
    for _ in range(_SYNC_CAP):
        mark = src.snapshot()
        if mark is not None:
            if mark in seen:
                cut = seen[mark]
                break
            seen[mark] = len(out)
        m = src.pull()
        if m is None:
            break
        if m % 2 == 1:
            out.append(Digit(m, 1))
        else:
            out.append(Digit(m + 1, -1))
            _insert_one(src)
    else:
        raise RuntimeError("rewriter failed to synchronize")

    pre, per = _canonical(out, cut)
    stream = DigitStream("ocf", leading, pre, per)
    validate_stream(stream)
    return stream


def rcf_to_ecf(d: DigitStream) -> DigitStream:
    """Rewrite a classical stream as an even stream with the same value.

    Even quotients pass through; an odd quotient ``m`` becomes ``m + 1``
    carrying a minus sign, and the insertion then unwinds the following
    quotient ``t`` as a run of ``(2, -1)`` digits one loop pass at a time.
    Values whose expansion bottoms out on an odd integer have no even
    representation at all, matching ``ecf_expand``.
    """
    _check_input(d)
    src = _Quotients(d)
    lead = d.leading.a
    leading = None
    if lead == 0:
        if src.peek() is None:
            raise ValueError("conversion needs a positive value")
    elif lead % 2 == 0:
        leading = Digit(lead, 1)
    else:
        if src.peek() is None:
            raise BoundaryError("an odd integer has no even expansion")
        leading = Digit(lead + 1, -1)
        _insert_one(src)

    out: list[Digit] = []
    seen: dict = {}
    cut = None
    for _ in range(_SYNC_CAP):
        mark = src.snapshot()
        if mark is not None:
            if mark in seen:
                cut = seen[mark]
                break
            seen[mark] = len(out)
        m = src.pull()
        if m is None:
            break
        if m % 2 == 0:
            out.append(Digit(m, 1))
            continue
        t = src.pull()
        if t is None:
            raise BoundaryError("an odd integer has no even expansion")
        if t == 1:
            u = src.pull()
            if u is None:
                # remaining value is m + 1/1, an even integer
                out.append(Digit(m + 1, 1))
                break
            out.append(Digit(m + 1, -1))
            src.push(u + 1)
        else:
            out.append(Digit(m + 1, -1))
            src.push(1, t - 1)
    else:
        raise RuntimeError("rewriter failed to synchronize")

    pre, per = _canonical(out, cut)
    stream = DigitStream("ecf", leading, pre, per)
    validate_stream(stream)
    return stream


def _against_golden(src: _Quotients) -> tuple[int, int]:
    """Compare the upcoming tail value with the golden ratio.

    Returns ``(verdict, depth)`` where the verdict is +1 when the tail
    exceeds the golden ratio, -1 when it falls short, and 0 on an exact
    all-ones tie; the depth is how many quotients the scan consumed.
    Alternation makes the parity of the first non-one position decide, and
    a finite tail of ones decides by its length.
    """
    bound = src.lookahead_bound()
    j = 0
    while True:
        q = src.peek(j)
        if q is None or q != 1:
            return (1 if j % 2 == 0 else -1), j
        j += 1
        if j > bound:
            return 0, j


def rcf_to_gcf(d: DigitStream) -> DigitStream:
    """Rewrite a classical stream as a grotesque stream with the same value.

    The admissibility constraint sits on the stored sign of each digit, so
    an even quotient must be rounded to a neighboring odd digit, up when the
    remaining tail falls short of the golden ratio and down when it exceeds
    it.  Rounding down splits off a forced ``(1, +1)``; either way the next
    digit inherits a minus sign.  The input value must lie inside the
    golden window, which for nonnegative streams means below the golden
    ratio.
    """
    _check_input(d)
    src = _Quotients(d)
    lead = d.leading.a
    deep = False
    out: list[Digit] = []
    sign = 1
    if lead > 1:
        raise ValueError("the value lies outside the golden window")
    if lead == 0 and src.peek() is None:
        raise ValueError("conversion needs a positive value")
    if lead == 1:
        if src.peek() is None:
            return DigitStream("gcf", None, (Digit(1, 1),), ())
        verdict, depth = _against_golden(src)
        deep = deep or depth >= 2
        if verdict <= 0:
            raise ValueError("the value lies outside the golden window")
        out.append(Digit(1, 1))
        t = src.pull()
        src.push(t + 1)
        sign = -1

    seen: dict = {}
    cut = None
    for _ in range(_SYNC_CAP):
        mark = src.snapshot()
        if mark is not None:
            key = (sign, mark)
            if key in seen:
                cut = seen[key]
                break
            seen[key] = len(out)
        m = src.pull()
        if m is None:
            break
        if m % 2 == 1:
            out.append(Digit(m, sign))
            sign = 1
            continue
        verdict, depth = _against_golden(src)
        deep = deep or depth >= 2
        if verdict == 0:
            raise BoundaryError("digit tie on an all-ones tail")
        if verdict > 0:
            out.append(Digit(m - 1, sign))
            out.append(Digit(1, 1))
            t = src.pull()
            if t is None:
                sign = -1
                break
            src.push(t + 1)
        else:
            out.append(Digit(m + 1, sign))
            t = src.pull()
            assert t == 1, "rounding up needs a one next"
            u = src.pull()
            assert u is not None, "canonical streams cannot end in 1"
            src.push(u + 1)
        sign = -1
    else:
        raise RuntimeError("rewriter failed to synchronize")

    pre, per = _canonical(out, cut)
    stream = DigitStream("gcf", None, pre, per)
    validate_stream(stream)
    if deep:
        stream = replace(stream, notes=(DEEP_LOOKBACK_NOTE,))
    return stream
