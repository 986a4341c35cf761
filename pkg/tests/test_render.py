"""Checks on the SVG tessellation pictures."""

import math
import re
import xml.dom.minidom

import pytest

from cutseq.exact import Surd
from cutseq.geodesic import OrientedGeodesic, cutting_sequence, word_text
from cutseq.render import render_svg

WINDOW = (-1.5, 1.5, 1.6)
SILVER_GEODESIC = OrientedGeodesic(Surd(1, 1, 2, 1), Surd(1, -1, 2, 1))


def dark_cells(svg):
    return svg.count('fill="#ccd5ee"')


class TestTessellation:
    def test_documents_are_well_formed_xml(self):
        svg = render_svg(WINDOW, 3, [SILVER_GEODESIC])
        xml.dom.minidom.parseString(svg)

    def test_shade_declaration_is_present(self):
        assert "base triangle (-1, 0, infinity) light" in render_svg(WINDOW, 0)

    @pytest.mark.parametrize("depth,expected", [(0, 2), (1, 4), (2, 8), (3, 16)])
    def test_dark_cell_count_doubles_with_depth(self, depth, expected):
        # Strips over [-2, 2): the even-indexed two are dark, and each
        # mediant generation flips shade, so dark cells double per level.
        assert dark_cells(render_svg(WINDOW, depth)) == expected

    def test_vertical_edges_cover_the_integer_fan(self):
        svg = render_svg(WINDOW, 0)
        assert svg.count("<line") == 5

    def test_arc_count_tracks_the_subdivision(self):
        # Per strip: the full Farey arc plus two children for each cap.
        for depth in range(4):
            svg = render_svg(WINDOW, depth)
            arcs = svg.count('stroke="#555566" stroke-width="1" fill="none"/>') - 5
            assert arcs == 4 * (1 + 2 * (2**depth - 1))

    def test_equal_inputs_give_equal_bytes(self):
        first = render_svg(WINDOW, 2, [SILVER_GEODESIC], "even", 5)
        second = render_svg(WINDOW, 2, [SILVER_GEODESIC], "even", 5)
        assert first == second

    @pytest.mark.parametrize("window", [(2.0, 1.0, 1.0), (0.0, 1.0, -0.5), (1.0, 1.0, 1.0)])
    def test_degenerate_windows_are_rejected(self, window):
        with pytest.raises(ValueError):
            render_svg(window, 2)

    def test_negative_depth_is_rejected(self):
        with pytest.raises(ValueError):
            render_svg(WINDOW, -1)


class TestGeodesicOverlay:
    def test_plain_tessellation_has_no_labels(self):
        svg = render_svg(WINDOW, 3)
        assert "<text" not in svg
        assert "#c0392b" not in svg

    def test_geodesic_adds_one_highlighted_arc(self):
        svg = render_svg(WINDOW, 3, [SILVER_GEODESIC])
        assert svg.count('stroke="#c0392b"') == 1

    def test_labels_spell_the_cutting_sequence(self):
        svg = render_svg(WINDOW, 3, [SILVER_GEODESIC], "odd", 6)
        drawn = "".join(re.findall(r">([lLrR])</text>", svg))
        expected = "".join(
            word_text(word) for _, word in cutting_sequence(SILVER_GEODESIC, 6, "odd")
        )
        assert drawn
        assert expected.startswith(drawn)

    def test_labels_sit_on_the_geodesic(self):
        scale = 240.0
        xmin, _, ymax = WINDOW
        svg = render_svg(WINDOW, 3, [SILVER_GEODESIC])
        u = float(SILVER_GEODESIC.forward.to_mpf())
        v = float(SILVER_GEODESIC.backward.to_mpf())
        center, radius = (u + v) / 2, abs(u - v) / 2
        spots = re.findall(r'<text x="([-0-9.]+)" y="([-0-9.]+)"', svg)
        assert spots
        for px, py in spots:
            x = float(px) / scale + xmin
            y = ymax - (float(py) + 4) / scale
            # Emitted coordinates carry six decimals, so allow the
            # rounding to pass through the squared terms.
            assert math.isclose((x - center) ** 2 + y**2, radius**2, abs_tol=1e-7)

    def test_two_geodesics_draw_two_arcs(self):
        other = OrientedGeodesic(Surd(0, 1, 3, 1), Surd(0, -1, 3, 1))
        svg = render_svg(WINDOW, 2, [SILVER_GEODESIC, other])
        assert svg.count('stroke="#c0392b"') == 2
