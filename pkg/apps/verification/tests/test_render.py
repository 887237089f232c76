"""
Tests for the SVG renders
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.core.exceptions import UnsupportedDimension
from apps.geometry.cover import build_cover
from apps.geometry.loader import load_fixture
from apps.verification.render import (
    ArrangementRenderer,
    decimal,
    render_document,
    render_geometry_svg,
    render_svg,
)


class DecimalTests(SimpleTestCase):
    """Fixed-point output of rationals"""

    def test_three_decimals(self):
        """Values are truncated to three decimals"""
        self.assertEqual(decimal(QQ(1, 3)), "0.333")
        self.assertEqual(decimal(2), "2.000")
        self.assertEqual(decimal(QQ(441, 2)), "220.500")


class ArrangementRenderTests(SimpleTestCase):
    """Planar renders"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.geometry = load_fixture("three_triangles")
        cls.arrangement = build_cover(cls.geometry, QQ(1, 10))

    def test_pieces_by_level(self):
        """Three cells, three bands and one corner"""
        svg = render_svg(self.arrangement)
        self.assertEqual(svg.count('class="piece level-1"'), 3)
        self.assertEqual(svg.count('class="piece level-2"'), 3)
        self.assertEqual(svg.count('class="piece level-3"'), 1)
        self.assertEqual(svg.count('class="simplex"'), 3)
        self.assertEqual(svg.count('class="open-set"'), 3)
        self.assertIn('data-index="0,1,2"', svg)

    def test_interfaces_have_ticks(self):
        """Every facet between two pieces is drawn with an orientation tick"""
        svg = render_svg(self.arrangement)
        facets = len([pair for pair in self.arrangement.facets if pair.crosses_pieces])
        self.assertLess(facets, len(self.arrangement.facets))
        self.assertEqual(svg.count('class="interface"'), facets)
        self.assertEqual(svg.count('class="orientation"'), facets)

    def test_interfaces_can_be_hidden(self):
        """The interface layer is optional"""
        svg = render_svg(self.arrangement, show_interfaces=False)
        self.assertNotIn('class="interface"', svg)

    def test_geometry_only(self):
        """Without a cover only the simplices are drawn"""
        svg = render_geometry_svg(self.geometry)
        self.assertEqual(svg.count('class="simplex"'), 3)
        self.assertNotIn('class="piece', svg)
        self.assertIn("<title>three_triangles</title>", svg)

    def test_render_is_deterministic(self):
        """Equal inputs give equal documents"""
        self.assertEqual(render_svg(self.arrangement), render_svg(self.arrangement))


class NumberLineTests(SimpleTestCase):
    """1D renders"""

    def test_planar_renderer_refuses_lines(self):
        """The arrangement renderer needs two dimensions"""
        with self.assertRaises(UnsupportedDimension):
            ArrangementRenderer(load_fixture("two_segments")).render()

    def test_number_line_fallback(self):
        """Two cells plus three pieces on separate rows"""
        g = load_fixture("two_segments")
        svg = render_document(g, build_cover(g, QQ(1, 10)))
        self.assertEqual(svg.count('class="segment'), 5)
        self.assertEqual(svg.count('class="segment row-2"'), 1)
