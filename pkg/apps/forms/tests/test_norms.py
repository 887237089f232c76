"""
Tests for the recursive graph norms
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.core.exceptions import NotWeaklyDifferentiable
from apps.forms.norms import graph_norm_cech, graph_norm_simplicial
from apps.forms.polyform import PiecewiseForm, PolyForm, X, constant_form
from apps.geometry.cover import FragmentKey, build_cover
from apps.geometry.loader import load_fixture

CELL_0 = FragmentKey((0,), 0)


def constant_on(arrangement, index, value=1):
    n = arrangement.ambient_dim
    return PiecewiseForm(0, {
        key: constant_form(value, n, arrangement.cell(key)) for key in arrangement.pieces(index)
    })


class SimplicialGraphNormTests(SimpleTestCase):
    """Norms on the simplicial side"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.triangles = load_fixture("three_triangles")
        cls.segments = load_fixture("two_segments")

    def test_constant_on_triangle(self):
        """Area 10 plus two edges of length 5 each carrying the junction point"""
        one = constant_form(1, 2)
        self.assertEqual(graph_norm_simplicial(one, (0,), self.triangles), 22)

    def test_weights_scale_single_levels(self):
        """A weight on Ω_0 only doubles its own term"""
        one = constant_form(1, 2)
        self.assertEqual(graph_norm_simplicial(one, (0,), self.triangles, {(0,): 2}), 32)

    def test_linear_function_on_segment(self):
        """x on [0, 1]: ‖x‖² = 1/3, ‖dx‖² = 1, and the value 1 at the junction"""
        form = PolyForm(1, 0, {(): X})
        self.assertEqual(graph_norm_simplicial(form, (0,), self.segments), QQ(7, 3))

    def test_point_norm_is_a_square(self):
        """On a 0-dimensional chart the norm is the squared value"""
        self.assertEqual(graph_norm_simplicial(constant_form(3, 0), (0, 1), self.segments), 9)


class CechGraphNormTests(SimpleTestCase):
    """Norms on the cover side"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.arrangement = build_cover(load_fixture("three_triangles"), QQ(1, 10))
        cls.line = build_cover(load_fixture("two_segments"), QQ(1, 10))

    def test_constant_counts_the_corner_twice(self):
        """The corner is reached through both overlaps of U_0"""
        arr = self.arrangement
        expected = (
            arr.measure((0,))
            + arr.measure((0, 1)) + arr.measure((0, 1, 2))
            + arr.measure((0, 2)) + arr.measure((0, 1, 2))
        )
        self.assertEqual(graph_norm_cech(constant_on(arr, (0,)), (0,), arr), expected)

    def test_constant_on_line(self):
        """U_0 = [0, 1 + ε] and its overlap has length 2ε"""
        self.assertEqual(graph_norm_cech(constant_on(self.line, (0,)), (0,), self.line), QQ(13, 10))

    def test_zero_form_has_zero_norm(self):
        """Nothing is summed for a vanishing form"""
        self.assertEqual(graph_norm_cech(PiecewiseForm(0, {}), (0,), self.arrangement), 0)

    def test_jump_is_refused(self):
        """A constant on the cell alone jumps at the band"""
        arr = self.arrangement
        b = PiecewiseForm(0, {CELL_0: constant_form(1, 2, arr.cell(CELL_0))})
        with self.assertRaises(NotWeaklyDifferentiable):
            graph_norm_cech(b, (0,), arr)
