"""
Tests for the cochain map Ξ
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.cochain.xi import XiConfig, XiMap, verify_cochain_property, verify_truncation, xi_apply
from apps.core import linalg
from apps.core.complexes import BigradeIndex, ChainMapBlock, check_cochain_map
from apps.core.exceptions import ArrangementMismatch
from apps.forms.polyform import PolyForm, X, Y, constant_form
from apps.geometry.cover import FragmentKey, build_cover, format_fragment
from apps.geometry.generator import random_geometry
from apps.geometry.loader import load_fixture
from apps.simplicial.complex import SimplicialElement

B00, B01, B10 = BigradeIndex(0, 0), BigradeIndex(0, 1), BigradeIndex(1, 0)
CORNER = FragmentKey((0, 1, 2), 0)


def config(name, cap=1, eps=QQ(1, 10), **kwargs):
    g = load_fixture(name)
    return XiConfig(g, build_cover(g, eps), cap, **kwargs)


class XiApplicationTests(SimpleTestCase):
    """Ξ on single elements"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cfg = config("three_triangles")

    def test_constant_extends_to_every_piece(self):
        """A constant on Ω_0 stays that constant on U_0"""
        a = SimplicialElement(B00, {(m,): constant_form(2, 2) for m in range(3)})
        image = xi_apply(a, self.cfg)
        self.assertEqual(set(image.components[(0,)].pieces), set(self.cfg.arrangement.pieces((0,))))
        for form in image.components[(0,)].pieces.values():
            self.assertEqual(form.component(()), 2)
        self.assertEqual(image.status[(0,)], "verified")

    def test_image_is_weakly_differentiable(self):
        """Pullbacks of a polynomial glue across every interior facet"""
        a = SimplicialElement(B00, {(m,): PolyForm(2, 0, {(): X * Y + 1}) for m in range(3)})
        image = xi_apply(a, self.cfg)
        self.assertTrue(all(status == "verified" for status in image.status.values()))

    def test_two_forms_vanish_on_bands(self):
        """Bands factor through an edge, so area forms pull back to zero there"""
        area = PolyForm(2, 2, {(0, 1): 1})
        a = SimplicialElement(BigradeIndex(0, 2), {(m,): area for m in range(3)})
        pieces = xi_apply(a, self.cfg).components[(0,)].pieces
        for key, form in pieces.items():
            self.assertEqual(form.is_zero(), key.piece != (0,), format_fragment(key))

    def test_foreign_component_is_refused(self):
        """Components must sit on the level of the bigrade"""
        a = SimplicialElement(B00, {(0, 1): constant_form(1, 1)})
        with self.assertRaises(ArrangementMismatch):
            xi_apply(a, self.cfg)

    def test_arrangement_from_other_geometry(self):
        """The arrangement has to come from the same geometry object"""
        arr = build_cover(load_fixture("three_triangles"), QQ(1, 10))
        with self.assertRaises(ArrangementMismatch):
            XiConfig(load_fixture("three_triangles"), arr, 1)


class CochainPropertyTests(SimpleTestCase):
    """Exact commutation and the structural checks"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.triangles = XiMap(config("three_triangles"))
        cls.segments = XiMap(config("two_segments"))

    def test_commutes_on_both_fixtures(self):
        """dΞ = Ξd and δΞ = Ξδ on every bigrade"""
        for xi in (self.triangles, self.segments):
            with self.subTest(name=xi.cfg.geometry.name):
                self.assertTrue(xi.verify_cochain_property().passed)

    def test_module_helpers(self):
        """The function forms agree with the class"""
        cfg = config("two_segments")
        self.assertTrue(verify_cochain_property(cfg).passed)
        self.assertTrue(verify_truncation(cfg).passed)

    def test_skipped_corner_is_caught(self):
        """Dropping the corner piece breaks commutation with δ"""
        report = self.triangles.verify_cochain_property({B10: {(0, 1, 2)}})
        self.assertFalse(report.passed)
        self.assertIn(B10, report.failed_bigrades())

    def test_sign_flip_is_caught(self):
        """Negating Ξ on one block breaks the relations landing there"""
        blocks = dict(self.segments.blocks)
        blocks[B10] = ChainMapBlock(B10, linalg.scale(blocks[B10].matrix, -1))
        cfg = self.segments.cfg
        report = check_cochain_map(cfg.simplicial.assembled, cfg.cech.assembled, blocks)
        self.assertFalse(report.passed)

    def test_truncation_relations(self):
        """Top-degree images are closed under d and δ"""
        self.assertTrue(self.triangles.verify_truncation().passed)

    def test_injective(self):
        """Every block has full column rank"""
        report = self.triangles.check_injectivity()
        self.assertTrue(report.passed, report.failed())

    def test_image_is_a_subcomplex(self):
        """d_A and δ_A keep the image of Ξ inside the image"""
        report = self.triangles.check_subcomplex()
        self.assertTrue(report.checks)
        self.assertTrue(report.passed, report.failed())


class CancellationTests(SimpleTestCase):
    """Interior boundary integrals of Ξa cancel pairwise"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cfg = config("three_triangles")
        cls.xi = XiMap(cls.cfg)

    def element(self):
        s = self.cfg.simplicial
        return s.element(B00, [QQ(k % 5 - 2, 3) for k in range(len(s.basis[B00]))])

    def test_pullbacks_cancel(self):
        """Opposite orientations cancel facet by facet"""
        report = self.xi.verify_weak_derivative_cancellation(self.element(), 1)
        self.assertTrue(report.residuals)
        self.assertTrue(report.passed)
        self.assertIsNone(report.first_failure())

    def test_one_forms_cancel(self):
        """Degree-one components cancel against functions"""
        s = self.cfg.simplicial
        a = s.element(B01, [QQ(k % 3 - 1) for k in range(len(s.basis[B01]))])
        self.assertTrue(self.xi.verify_weak_derivative_cancellation(a, 1).passed)

    def test_broken_extension_is_caught(self):
        """Adding 1 + x² on the bands leaves a residual"""
        a = self.element()
        image = xi_apply(a, self.cfg)
        for i, b in image.components.items():
            for key in list(b.pieces):
                if self.cfg.arrangement.is_band(key.piece):
                    bump = PolyForm(2, 0, {(): X ** 2 + 1}, self.cfg.arrangement.cell(key))
                    b.pieces[key] = b.pieces[key] + bump
        report = self.xi.verify_weak_derivative_cancellation(a, 1, extension=image)
        self.assertFalse(report.passed)
        self.assertIsNotNone(report.first_failure())

    def test_line_cancellation(self):
        """In 1D the signed point values cancel"""
        cfg = config("two_segments")
        x = PolyForm(1, 0, {(): X})
        a = SimplicialElement(B00, {(0,): x, (1,): x.scale(2)})
        self.assertTrue(XiMap(cfg).verify_weak_derivative_cancellation(a, 1).passed)


class BigradeCaseTests(SimpleTestCase):
    """Where each block of Ξ puts its image"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cfg = config("three_triangles")

    def test_edge_one_form_lives_on_its_band(self):
        """A 1-form on Ω_01 survives on the band and vanishes on the corner"""
        a = SimplicialElement(BigradeIndex(1, 1), {
            (0, 1): PolyForm(1, 1, {(0,): 1}),
            (0, 2): PolyForm(1, 1, {}),
            (1, 2): PolyForm(1, 1, {}),
        })
        pieces = xi_apply(a, self.cfg).components[(0, 1)].pieces
        for key in self.cfg.arrangement.parts((0, 1)):
            self.assertFalse(pieces[key].is_zero())
        self.assertTrue(pieces[CORNER].is_zero())

    def test_vertex_constant_fills_the_corner(self):
        """A value at the junction becomes that constant on the corner cell"""
        a = SimplicialElement(BigradeIndex(2, 0), {(0, 1, 2): constant_form(7, 0)})
        pieces = xi_apply(a, self.cfg).components[(0, 1, 2)].pieces
        self.assertEqual(list(pieces), [CORNER])
        self.assertEqual(pieces[CORNER].component(()), 7)


    def test_every_block_respects_piece_dimension(self):
        """Ξ^{p,q} vanishes on pieces of dimension below q and survives on Ω_i's own piece"""
        s, g = self.cfg.simplicial, self.cfg.geometry
        for bigrade in s.bigrades():
            if not len(s.basis[bigrade]):
                continue
            with self.subTest(bigrade=bigrade.label()):
                a = s.element(bigrade, [QQ(k + 1) for k in range(len(s.basis[bigrade]))])
                for i, component in xi_apply(a, self.cfg).components.items():
                    for key, form in component.pieces.items():
                        if g.simplex_dim(key.piece) < bigrade.q:
                            self.assertTrue(form.is_zero(), format_fragment(key))
                        elif key.piece == i:
                            self.assertFalse(form.is_zero(), format_fragment(key))


class DegreeCapTests(SimpleTestCase):
    """Commutation for each polynomial degree cap"""

    def test_commutes_for_caps_one_to_three(self):
        """dΞ = Ξd and δΞ = Ξδ for r = 1, 2, 3 on both fixtures"""
        for name in ("two_segments", "three_triangles"):
            for cap in (1, 2, 3):
                with self.subTest(name=name, cap=cap):
                    report = XiMap(config(name, cap)).verify_cochain_property()
                    self.assertTrue(report.passed, report.failed_bigrades())


class RandomGeometryTests(SimpleTestCase):
    """Ξ on seeded triangle geometries"""

    def test_cochain_property_on_random_geometries(self):
        """Ξ commutes with both differentials and is injective on three generated layouts"""
        for seed in (1, 2, 3):
            with self.subTest(seed=seed):
                g = random_geometry(seed)
                xi = XiMap(XiConfig(g, build_cover(g, QQ(1, 20)), 1))
                self.assertTrue(xi.verify_cochain_property().passed)
                injectivity = xi.check_injectivity()
                self.assertTrue(injectivity.passed, injectivity.failed())
