"""
Tests for the Čech-de Rham double complex of a cover arrangement
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.cech.complex import (
    BROKEN,
    VERIFIED,
    CechDeRham,
    CechElement,
    assemble,
    check_weak_differentiability,
    difference_operator,
    nerve_complex,
    truncate,
)
from apps.core import linalg
from apps.core.complexes import BigradeIndex, betti_numbers, hodge_decompose, total_complex, verify_double_complex
from apps.core.exceptions import NotWeaklyDifferentiable, ShapeMismatch
from apps.forms.polyform import GRADED, PiecewiseForm, constant_form
from apps.geometry.cover import FragmentKey, build_cover
from apps.geometry.loader import load_fixture

B00, B01, B10, B11 = BigradeIndex(0, 0), BigradeIndex(0, 1), BigradeIndex(1, 0), BigradeIndex(1, 1)

CELL_0 = FragmentKey((0,), 0)


def constant_on(arrangement, index, value=1):
    n = arrangement.ambient_dim
    return PiecewiseForm(0, {
        key: constant_form(value, n, arrangement.cell(key)) for key in arrangement.pieces(index)
    })


class ConformingSpaceTests(SimpleTestCase):
    """Tangentially continuous piecewise spaces"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.line = build_cover(load_fixture("two_segments"), QQ(1, 10))
        cls.arrangement = build_cover(load_fixture("three_triangles"), QQ(1, 10))

    def test_constants_on_line(self):
        """Constants glue at the band facet, 1-forms have nothing to match in 1D"""
        a = CechDeRham(self.line, 0)
        self.assertEqual(a.space((0,), 0).raw_dim, 2)
        self.assertEqual(a.space((0,), 0).dim, 1)
        self.assertEqual(a.space((0,), 1).dim, 2)
        self.assertEqual({b.label(): a.dim(b) for b in a.bigrades()}, {"0,0": 2, "0,1": 4, "1,0": 1, "1,1": 1})

    def test_continuous_constants_on_triangles(self):
        """Only the global constant survives on U_0 in degree zero at r = 0"""
        a = CechDeRham(self.arrangement, 0)
        self.assertEqual(a.space((0,), 0).dim, 1)
        self.assertEqual(a.space((0, 1, 2), 0).dim, 1)

    def test_weak_differentiability(self):
        """A constant on all of U_0 is continuous, one on the cell alone is not"""
        arr = self.arrangement
        self.assertTrue(check_weak_differentiability(constant_on(arr, (0,)), arr, (0,)).verified)
        broken = PiecewiseForm(0, {CELL_0: constant_form(1, 2, arr.cell(CELL_0))})
        result = check_weak_differentiability(broken, arr, (0,))
        self.assertEqual(result.status, BROKEN)
        self.assertIn(CELL_0, (result.witness.lower, result.witness.upper))

    def test_non_conforming_vector_is_refused(self):
        """Coordinates are only read off conforming raw vectors"""
        a = CechDeRham(self.arrangement, 0)
        broken = PiecewiseForm(0, {CELL_0: constant_form(1, 2, self.arrangement.cell(CELL_0))})
        element = CechElement(B00, {(m,): broken if m == 0 else constant_on(self.arrangement, (m,)) for m in range(3)})
        with self.assertRaises(NotWeaklyDifferentiable):
            a.vector(element)

    def test_element_length(self):
        """Vectors must match the block dimension"""
        with self.assertRaises(ShapeMismatch):
            CechDeRham(self.line, 0).element(B00, [1])


class DifferenceOperatorTests(SimpleTestCase):
    """δ on Čech elements"""

    def test_difference_of_constants(self):
        """(δa)_01 = a_1 - a_0 on the overlap"""
        arr = build_cover(load_fixture("two_segments"), QQ(1, 10))
        a = CechElement(
            B00,
            {(0,): constant_on(arr, (0,), 1), (1,): constant_on(arr, (1,), 4)},
            {(0,): VERIFIED, (1,): VERIFIED},
        )
        delta = difference_operator(a, arr)
        self.assertEqual(delta.bigrade, B10)
        self.assertEqual(delta.status[(0, 1)], VERIFIED)
        band = delta.component((0, 1)).pieces[FragmentKey((0, 1), 0)]
        self.assertEqual(band.component(()), 3)

    def test_unchecked_inputs_stay_unverified(self):
        """Status is verified only when every contributing face was"""
        arr = build_cover(load_fixture("two_segments"), QQ(1, 10))
        a = CechElement(B00, {(0,): constant_on(arr, (0,)), (1,): constant_on(arr, (1,))}, {(0,): VERIFIED})
        self.assertNotEqual(difference_operator(a, arr).status[(0, 1)], VERIFIED)


class CechAxiomTests(SimpleTestCase):
    """Identities, truncation and cohomology of A"""

    def test_axioms_hold(self):
        """d², δ² and dδ + δd vanish on both fixtures"""
        for name in ("two_segments", "three_triangles"):
            with self.subTest(name=name):
                arr = build_cover(load_fixture(name), QQ(1, 10))
                self.assertTrue(verify_double_complex(assemble(arr, 1)).passed)

    def test_truncation_keeps_the_kernel(self):
        """T^n becomes ker D^n and nothing above n survives"""
        arr = build_cover(load_fixture("two_segments"), QQ(1, 10))
        c = assemble(arr, 1)
        full = total_complex(c)
        cut = truncate(c, 1)
        self.assertEqual(max(cut.dims), 1)
        self.assertEqual(cut.dims[1], linalg.nullspace(full.D(1)).dimension)
        self.assertEqual(cut.dims[0], full.dims[0])
        self.assertEqual(cut.D(0).shape, (cut.dims[1], cut.dims[0]))

    def test_truncated_betti_numbers(self):
        """The truncated graded complex sees the topology of the domain"""
        expected = {"two_segments": [1, 0], "three_triangles": [1, 0, 0], "annulus": [1, 1, 0]}
        for name, betti in expected.items():
            with self.subTest(name=name):
                g = load_fixture(name)
                arr = build_cover(g, QQ(1, 10))
                self.assertEqual(betti_numbers(truncate(assemble(arr, 2, GRADED), g.ambient_dim)), betti)

    def test_nerve_complex(self):
        """Constants alone give the cohomology of the nerve"""
        arr = build_cover(load_fixture("three_triangles"), QQ(1, 10))
        self.assertEqual(betti_numbers(total_complex(nerve_complex(arr))), [1, 0, 0])
        ring = build_cover(load_fixture("annulus"), QQ(1, 10))
        self.assertEqual(betti_numbers(total_complex(nerve_complex(ring))), [1, 1])

    def test_global_constant_is_harmonic(self):
        """Constant one is closed and orthogonal to nothing exact in degree zero"""
        arr = build_cover(load_fixture("three_triangles"), QQ(1, 10))
        a = CechDeRham(arr, 1)
        one = CechElement(B00, {(m,): constant_on(arr, (m,)) for m in range(3)})
        v = a.vector(one)
        parts = hodge_decompose(total_complex(a.assembled), 0, v)
        self.assertEqual(parts.harmonic, v)
        self.assertTrue(all(x == 0 for x in parts.coexact))
