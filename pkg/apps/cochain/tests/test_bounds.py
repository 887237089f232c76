"""
Tests for the norm bounds of Ξ
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.cochain.bounds import BoundEstimator, bound_constants, singular_squares
from apps.cochain.xi import XiConfig
from apps.core.complexes import BigradeIndex
from apps.forms.polyform import constant_form
from apps.geometry.cover import build_cover
from apps.geometry.loader import load_fixture
from apps.simplicial.complex import SimplicialElement

B10 = BigradeIndex(1, 0)


def config(name, eps, cap=1, weighted=False):
    g = load_fixture(name)
    return XiConfig(g, build_cover(g, eps), cap, weighted_mode=weighted)


class PullbackFactorTests(SimpleTestCase):
    """Exact factors per piece"""

    def test_line_band_is_twice_epsilon(self):
        """A point value spreads over a band of length 2ε, a trimmed cell is stretched"""
        estimator = BoundEstimator(config("two_segments", QQ(1, 4)))
        self.assertEqual(estimator.pullback_factors((0, 1)), {0: (QQ(1, 2), QQ(1, 2))})
        self.assertEqual(
            estimator.pullback_factors((0,)),
            {0: (QQ(3, 4), QQ(3, 4)), 1: (QQ(4, 3), QQ(4, 3))},
        )

    def test_point_ratio_matches_factor(self):
        """‖Ξa‖² / ‖a‖² for a point constant is exactly 2ε"""
        estimator = BoundEstimator(config("two_segments", QQ(1, 4)))
        a = SimplicialElement(B10, {(0, 1): constant_form(3, 0)})
        self.assertEqual(estimator.ratio(a), QQ(1, 2))

    def test_weighted_ratio_is_one(self):
        """The weight of the point absorbs the band factor"""
        estimator = BoundEstimator(config("two_segments", QQ(1, 4), weighted=True))
        a = SimplicialElement(B10, {(0, 1): constant_form(3, 0)})
        self.assertEqual(estimator.ratio(a), 1)

    def test_zero_element_is_skipped(self):
        """0/0 has no ratio"""
        estimator = BoundEstimator(config("two_segments", QQ(1, 4)))
        self.assertIsNone(estimator.ratio(SimplicialElement(B10, {(0, 1): constant_form(0, 0)})))

    def test_trimmed_cell_factors(self):
        """Ũ_0 is Ω_0 shrunk by 19/20, so 1-forms keep their norm"""
        estimator = BoundEstimator(config("three_triangles", QQ(1, 10)))
        self.assertEqual(
            estimator.pullback_factors((0,)),
            {
                0: (QQ(361, 400), QQ(361, 400)),
                1: (QQ(1), QQ(1)),
                2: (QQ(400, 361), QQ(400, 361)),
            },
        )

    def test_band_factors_in_the_plane(self):
        """Band densities are exact at both ends of the edge"""
        cfg = config("three_triangles", QQ(1, 10))
        factors = BoundEstimator(cfg).pullback_factors((0, 1))
        self.assertEqual(factors[0], (QQ(19, 100), QQ(99, 500)))
        self.assertEqual(factors[1], (QQ(4, 19), QQ(1980, 1957)))
        mean = cfg.arrangement.piece_measure((0, 1)) / cfg.geometry.edge_length((0, 1))
        self.assertTrue(factors[0][0] <= mean <= factors[0][1])

    def test_corner_factor_is_its_area(self):
        """A corner collapses onto a point"""
        estimator = BoundEstimator(config("three_triangles", QQ(1, 10)))
        self.assertEqual(estimator.pullback_factors((0, 1, 2)), {0: (QQ(7, 400), QQ(7, 400))})

    def test_singular_squares(self):
        """Rational singular values when they exist, an envelope otherwise"""
        self.assertEqual(singular_squares(((QQ(3), QQ(0)), (QQ(0), QQ(1)))), (QQ(1), QQ(9)))
        low, high = singular_squares(((QQ(1), QQ(1)), (QQ(0), QQ(1))))
        # σ² = (3 ± √5) / 2
        self.assertEqual((low, high), (QQ(1, 3), QQ(3)))

    def test_negative_samples_refused(self):
        """Sample counts cannot be negative"""
        with self.assertRaises(ValueError):
            BoundEstimator(config("two_segments", QQ(1, 4)), samples=-1)


class BoundConstantTests(SimpleTestCase):
    """Constants and the sampled sandwich"""

    def test_line_constants(self):
        """One overlap per cell: C1² = 4 · 4/3, C2² = 1/(2ε)"""
        estimate = bound_constants(config("two_segments", QQ(1, 4)))
        self.assertEqual(estimate.c1_squared, QQ(16, 3))
        self.assertEqual(estimate.c2_squared, 2)
        self.assertEqual(estimate.lower, QQ(1, 2))
        self.assertIsNone(estimate.extremes)

    def test_triangle_c1_uses_widest_star(self):
        """Ω_0 meets two edges and the point, so the prefactor is 4²"""
        estimate = bound_constants(config("three_triangles", QQ(1, 10)))
        widest = max(upper for upper, _ in estimate.per_index_factors.values())
        self.assertEqual(estimate.c1_squared, 16 * widest)

    def test_unweighted_constants_grow_as_epsilon_shrinks(self):
        """The corner has area 7ε²/4, so halving ε quadruples C2²"""
        wide = bound_constants(config("three_triangles", QQ(1, 10)))
        thin = bound_constants(config("three_triangles", QQ(1, 20)))
        self.assertEqual(wide.c2_squared, QQ(400, 7))
        self.assertEqual(thin.c2_squared, QQ(1600, 7))

    def test_weighted_constants_stay_bounded(self):
        """Weights absorb the collapse; only the O(ε) stretch of the pieces is left"""
        for name in ("two_segments", "three_triangles"):
            with self.subTest(name=name):
                wide = bound_constants(config(name, QQ(1, 10), weighted=True))
                thin = bound_constants(config(name, QQ(1, 20), weighted=True))
                self.assertEqual(wide.c1_squared, thin.c1_squared)
                self.assertLess(thin.c2_squared, 2 * wide.c2_squared)

    def test_weighted_line_constants(self):
        """In 1D the stretch of the trimmed cells is all that remains"""
        wide = bound_constants(config("two_segments", QQ(1, 10), weighted=True))
        thin = bound_constants(config("two_segments", QQ(1, 20), weighted=True))
        self.assertEqual(wide.c2_squared, QQ(100, 81))
        self.assertEqual(thin.c2_squared, QQ(400, 361))

    def test_sampled_ratios_are_sandwiched(self):
        """Every sampled ratio lies in [1/C2², C1²]"""
        estimate = bound_constants(config("two_segments", QQ(1, 4)), samples=12, seed=5)
        self.assertEqual(len(estimate.sample_ratios) + estimate.skipped, 12)
        self.assertTrue(estimate.passed, estimate.violations())
        low, high = estimate.extremes
        self.assertLessEqual(estimate.lower, low)
        self.assertLessEqual(high, estimate.upper)

    def test_sandwich_in_the_plane(self):
        """The planar fixture stays inside its bounds too"""
        estimate = bound_constants(config("three_triangles", QQ(1, 10)), samples=6, seed=1)
        self.assertTrue(estimate.passed, estimate.violations())

    def test_seed_determinism(self):
        """The same seed draws the same ratios"""
        cfg = config("two_segments", QQ(1, 4))
        first = bound_constants(cfg, samples=5, seed=9).sample_ratios
        second = bound_constants(cfg, samples=5, seed=9).sample_ratios
        self.assertEqual(first, second)
