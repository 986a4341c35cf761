"""Static SVG pictures of the checkered Farey tessellation.

The tessellation's ideal triangles are two-colored so that neighbours
across any edge differ.  The base triangle (-1, 0, infinity) is light,
which makes the strip triangle (n, n+1, infinity) dark exactly for even
n, and every mediant subdivision flips its parent's shade.  Geodesics
are semicircles; their crossing letters can be placed where the arc
meets the drawn edges so the picture reads against the coder output.

Everything is a pure function of the arguments: cells, edges, and
labels are emitted in a fixed recursion order with fixed formatting, so
equal inputs give byte-identical documents.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Surd
from .geodesic import OrientedGeodesic, cutting_sequence, word_text

__all__ = ["render_svg"]

_SCALE = 240.0
_DARK_FILL = "#ccd5ee"
_EDGE_STROKE = "#555566"
_GEODESIC_STROKE = "#c0392b"
_FONT_SIZE = 14


def _flt(value) -> float:
    if isinstance(value, Surd):
        return float(value.to_mpf())
    return float(value)


def _mediant(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


class _Canvas:
    def __init__(self, xmin: float, xmax: float, ymax: float) -> None:
        self.xmin = xmin
        self.ymax = ymax
        self.width = (xmax - xmin) * _SCALE
        self.height = ymax * _SCALE

    def point(self, x: float, y: float) -> tuple[float, float]:
        return (x - self.xmin) * _SCALE, (self.ymax - y) * _SCALE

    def arc(self, lo: float, hi: float, sweep: int) -> str:
        """Path fragment along the semicircle over (lo, hi)."""
        r = (hi - lo) / 2 * _SCALE
        x0, y0 = self.point(lo, 0.0) if sweep else self.point(hi, 0.0)
        x1, y1 = self.point(hi, 0.0) if sweep else self.point(lo, 0.0)
        return f"A {r:.6f} {r:.6f} 0 0 {sweep} {x1:.6f} {y1:.6f}"


def _collect_cells(
    n0: int, n1: int, depth: int
) -> tuple[list[tuple], list[int], list[tuple[Fraction, Fraction]]]:
    cells = []
    verticals = list(range(n0, n1 + 1))
    arcs: list[tuple[Fraction, Fraction]] = []

    def subdivide(a: Fraction, b: Fraction, dark: bool, levels: int) -> None:
        if levels == 0:
            return
        m = _mediant(a, b)
        cells.append(("cap", a, m, b, dark))
        arcs.append((a, m))
        arcs.append((m, b))
        subdivide(a, m, not dark, levels - 1)
        subdivide(m, b, not dark, levels - 1)

    for n in range(n0, n1):
        dark = n % 2 == 0
        cells.append(("strip", Fraction(n), Fraction(n + 1), dark))
        arcs.append((Fraction(n), Fraction(n + 1)))
        subdivide(Fraction(n), Fraction(n + 1), not dark, depth)
    return cells, verticals, arcs


def _cell_path(cell: tuple, canvas: _Canvas) -> str:
    if cell[0] == "strip":
        _, a, b, _ = cell
        ax, ay = canvas.point(float(a), canvas.ymax)
        bx, by = canvas.point(float(a), 0.0)
        cx, cy = canvas.point(float(b), canvas.ymax)
        return (
            f"M {ax:.6f} {ay:.6f} L {bx:.6f} {by:.6f} "
            f"{canvas.arc(float(a), float(b), 1)} L {cx:.6f} {cy:.6f} Z"
        )
    _, a, m, b, _ = cell
    ax, ay = canvas.point(float(a), 0.0)
    return (
        f"M {ax:.6f} {ay:.6f} {canvas.arc(float(a), float(b), 1)} "
        f"{canvas.arc(float(m), float(b), 0)} {canvas.arc(float(a), float(m), 0)} Z"
    )


def _crossings(
    forward: Surd,
    backward: Surd,
    verticals: Iterable[int],
    arcs: Iterable[tuple[Fraction, Fraction]],
) -> list[tuple[float, float]]:
    """Points where the geodesic meets the drawn edges, in travel order."""
    lo, hi = (backward, forward) if backward < forward else (forward, backward)
    c = (_flt(forward) + _flt(backward)) / 2
    r = abs(_flt(forward) - _flt(backward)) / 2
    points = []
    for n in verticals:
        if lo < n < hi:
            points.append((float(n), math.sqrt(max(r * r - (n - c) ** 2, 0.0))))
    for a, b in arcs:
        if (lo < a < hi) == (lo < b < hi):
            continue
        c2 = float(a + b) / 2
        r2 = float(b - a) / 2
        x = (r * r - r2 * r2 + c2 * c2 - c * c) / (2 * (c2 - c))
        points.append((x, math.sqrt(max(r * r - (x - c) ** 2, 0.0))))
    points.sort(key=lambda p: p[0], reverse=forward < backward)
    return points


def render_svg(
    window: tuple = (-1.5, 1.5, 1.6),
    depth: int = 3,
    geodesics: Sequence[OrientedGeodesic] = (),
    parity: str = "odd",
    letter_groups: int = 8,
) -> str:
    """Draw the shaded tessellation with optional coded geodesic arcs.

    ``window`` is (xmin, xmax, ymax) over the real line and ``depth``
    counts mediant generations below the cusp strip.  Each geodesic gets
    a semicircular arc plus the letters of its crossing word, one per
    drawn edge it meets, in flow order.
    """
    xmin, xmax, ymax = (_flt(v) for v in window)
    if not (xmin < xmax and ymax > 0) or depth < 0:
        raise ValueError("degenerate window")
    canvas = _Canvas(xmin, xmax, ymax)
    n0 = math.floor(xmin)
    n1 = math.ceil(xmax)
    cells, verticals, arcs = _collect_cells(n0, n1, depth)

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {canvas.width:.6f} {canvas.height:.6f}" '
        f'width="{canvas.width:.6f}" height="{canvas.height:.6f}">',
        "<desc>base triangle (-1, 0, infinity) light; neighbours alternate</desc>",
        f'<rect x="0" y="0" width="{canvas.width:.6f}" height="{canvas.height:.6f}" fill="#ffffff"/>',
    ]
    for cell in cells:
        if cell[-1]:
            lines.append(f'<path d="{_cell_path(cell, canvas)}" fill="{_DARK_FILL}" stroke="none"/>')
    for n in verticals:
        x0, y0 = canvas.point(float(n), 0.0)
        x1, y1 = canvas.point(float(n), ymax)
        lines.append(
            f'<line x1="{x0:.6f}" y1="{y0:.6f}" x2="{x1:.6f}" y2="{y1:.6f}" '
            f'stroke="{_EDGE_STROKE}" stroke-width="1" fill="none"/>'
        )
    for a, b in arcs:
        x0, y0 = canvas.point(float(a), 0.0)
        lines.append(
            f'<path d="M {x0:.6f} {y0:.6f} {canvas.arc(float(a), float(b), 1)}" '
            f'stroke="{_EDGE_STROKE}" stroke-width="1" fill="none"/>'
        )
    for g in geodesics:
        u, v = _flt(g.forward), _flt(g.backward)
        x0, y0 = canvas.point(min(u, v), 0.0)
        lines.append(
            f'<path d="M {x0:.6f} {y0:.6f} {canvas.arc(min(u, v), max(u, v), 1)}" '
            f'stroke="{_GEODESIC_STROKE}" stroke-width="2" fill="none"/>'
        )
        letters = "".join(
            word_text(word) for _, word in cutting_sequence(g, letter_groups, parity)
        )
        spots = _crossings(g.forward, g.backward, verticals, arcs)
        for letter, (x, y) in zip(letters, spots):
            px, py = canvas.point(x, y)
            lines.append(
                f'<text x="{px:.6f}" y="{py - 4:.6f}" font-size="{_FONT_SIZE}" '
                f'font-family="monospace" fill="#1a1a1a">{letter}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines)
