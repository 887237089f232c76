"""
Tests for polynomial differential forms
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.core.exceptions import CellMismatch, DegreeMismatch, DegreeOverflow, NotAFace
from apps.forms.polyform import (
    GRADED,
    UNIFORM,
    PolyForm,
    R,
    X,
    Y,
    constant_form,
    coordinates,
    evaluate,
    exterior_derivative,
    form_basis,
    from_coordinates,
    gram_matrix,
    inner_product_l2,
    integrate,
    pullback_affine,
    trace,
    wedge,
)
from apps.geometry.affine import AffineMap
from apps.geometry.polygons import Interval, Polygon

UNIT_TRIANGLE = Polygon.from_points([(0, 0), (1, 0), (0, 1)])
UNIT_SQUARE = Polygon.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])


def dx(poly=1, cell=None):
    return PolyForm(2, 1, {(0,): poly}, cell)


def dy(poly=1, cell=None):
    return PolyForm(2, 1, {(1,): poly}, cell)


def area_form(poly=1, cell=None):
    return PolyForm(2, 2, {(0, 1): poly}, cell)


class ExteriorCalculusTests(SimpleTestCase):
    """d and ∧ on polynomial forms"""

    def test_derivative_of_function(self):
        """d(xy) = y dx + x dy"""
        f = PolyForm(2, 0, {(): X * Y})
        df = exterior_derivative(f)
        self.assertEqual(df.component((0,)), Y)
        self.assertEqual(df.component((1,)), X)

    def test_derivative_of_one_forms(self):
        """d(x dy) = dx∧dy and d(y dx) = -dx∧dy"""
        self.assertEqual(exterior_derivative(dy(X)).component((0, 1)), R.one)
        self.assertEqual(exterior_derivative(dx(Y)).component((0, 1)), -R.one)

    def test_d_squared_is_zero(self):
        """dd vanishes identically"""
        f = PolyForm(2, 0, {(): X ** 2 * Y + 3 * Y ** 3})
        self.assertTrue(exterior_derivative(exterior_derivative(f)).is_zero())

    def test_top_degree_derivative(self):
        """A top form maps to zero unless strict"""
        self.assertTrue(exterior_derivative(area_form(X)).is_zero())
        with self.assertRaises(DegreeOverflow):
            exterior_derivative(area_form(X), strict=True)

    def test_wedge_antisymmetry(self):
        """dx∧dy = -dy∧dx and dx∧dx = 0"""
        self.assertEqual(wedge(dx(), dy()).component((0, 1)), R.one)
        self.assertEqual(wedge(dy(), dx()).component((0, 1)), -R.one)
        self.assertTrue(wedge(dx(), dx()).is_zero())

    def test_leibniz_rule(self):
        """d(f g) = df g + f dg for functions"""
        f = PolyForm(2, 0, {(): X + Y})
        g = PolyForm(2, 0, {(): X * Y})
        left = exterior_derivative(wedge(f, g))
        right = wedge(exterior_derivative(f), g) + wedge(f, exterior_derivative(g))
        self.assertTrue(left.same_form(right))

    def test_wrong_basis_tuple(self):
        """A 1-form cannot carry a dx∧dy coefficient"""
        with self.assertRaises(DegreeMismatch):
            PolyForm(2, 1, {(0, 1): R.one})


class PullbackTests(SimpleTestCase):
    """Affine pullbacks and traces"""

    def test_pullback_along_a_line(self):
        """s -> (s, 2s) pulls dy back to 2 ds and x back to s"""
        m = AffineMap.build([[1], [2]], [0, 0], 1, Interval(QQ(0), QQ(1)))
        form = pullback_affine(m, dy(X))
        self.assertEqual(form.dim, 1)
        self.assertEqual(form.component((0,)), 2 * X)

    def test_pullback_of_area_form(self):
        """Pullback multiplies the top coefficient by the determinant"""
        m = AffineMap.build([[2, 0], [1, 3]], [1, 0], 2)
        self.assertEqual(pullback_affine(m, area_form()).component((0, 1)), 6 * R.one)

    def test_trace_outside_cell(self):
        """A face map leaving the cell is not a face"""
        segment = Interval(QQ(0), QQ(1))
        inside = AffineMap.build([[1], [0]], [0, 0], 1, segment)
        outside = AffineMap.build([[1], [0]], [0, 5], 1, segment)
        self.assertEqual(trace(constant_form(1, 2, UNIT_SQUARE), inside).component(()), R.one)
        with self.assertRaises(NotAFace):
            trace(constant_form(1, 2, UNIT_SQUARE), outside)


class IntegrationTests(SimpleTestCase):
    """Exact integrals and inner products"""

    def test_area_of_triangle(self):
        """∫ dx∧dy over the unit triangle is 1/2"""
        self.assertEqual(integrate(area_form(cell=UNIT_TRIANGLE)), QQ(1, 2))

    def test_moment_over_square(self):
        """∫ x y over the unit square is 1/4"""
        self.assertEqual(integrate(area_form(X * Y, UNIT_SQUARE)), QQ(1, 4))

    def test_interval_integral(self):
        """∫_0^2 x dx = 2"""
        form = PolyForm(1, 1, {(0,): X}, Interval(QQ(0), QQ(2)))
        self.assertEqual(integrate(form), 2)

    def test_integrate_needs_top_degree(self):
        """Only n-forms integrate over n-cells"""
        with self.assertRaises(DegreeMismatch):
            integrate(dx(cell=UNIT_SQUARE))

    def test_inner_product_sums_components(self):
        """(dx + dy, dx + dy) is twice the area"""
        form = dx(cell=UNIT_SQUARE) + dy(cell=UNIT_SQUARE)
        self.assertEqual(inner_product_l2(form, form), 2)

    def test_cells_must_agree(self):
        """Forms on different cells do not combine"""
        with self.assertRaises(CellMismatch):
            inner_product_l2(constant_form(1, 2, UNIT_SQUARE), constant_form(1, 2, UNIT_TRIANGLE))

    def test_gram_matrix_is_symmetric(self):
        """The monomial Gram matrix on the triangle is symmetric with area in the corner"""
        basis = form_basis(2, 0, 1, UNIFORM, UNIT_TRIANGLE)
        gram = gram_matrix(basis)
        self.assertEqual(gram.shape, (3, 3))
        self.assertEqual(gram[0][0], QQ(1, 2))
        for i in range(3):
            for j in range(3):
                self.assertEqual(gram.get(i, {}).get(j), gram.get(j, {}).get(i))


TRIANGLE_POINTS = [(0, 0), (3, 0), (1, 2)]


def side_map(start, end):
    """s -> start + s (end - start) on [0, 1]."""
    return AffineMap.build(
        [[end[0] - start[0]], [end[1] - start[1]]], start, 1, Interval(QQ(0), QQ(1))
    )


def boundary_integral(form, points):
    sides = zip(points, points[1:] + points[:1])
    return sum((integrate(pullback_affine(side_map(p, q), form)) for p, q in sides), QQ(0))


class StokesTests(SimpleTestCase):
    """∫ dω over a cell equals the integral of ω around its boundary"""

    def test_stokes_on_triangle(self):
        """ω = x²y dx + (x + y³) dy gives -7/2 on both sides"""
        cell = Polygon.from_points(TRIANGLE_POINTS)
        omega = dx(X**2 * Y) + dy(X + Y**3)
        inside = integrate(exterior_derivative(omega).on(cell))
        self.assertEqual(inside, QQ(-7, 2))
        self.assertEqual(boundary_integral(omega, TRIANGLE_POINTS), inside)

    def test_integration_by_parts(self):
        """∫ df∧β + ∫ f dβ = ∮ f β"""
        cell = Polygon.from_points(TRIANGLE_POINTS)
        f = PolyForm(2, 0, {(): X * Y})
        beta = dx(Y**2) + dy(X)
        volume = integrate((wedge(exterior_derivative(f), beta) + wedge(f, exterior_derivative(beta))).on(cell))
        self.assertEqual(volume, boundary_integral(wedge(f, beta), TRIANGLE_POINTS))

    def test_fundamental_theorem_on_interval(self):
        """In 1D the boundary is two points with opposite signs"""
        f = PolyForm(1, 0, {(): X**3 - 2 * X})
        df = exterior_derivative(f).on(Interval(QQ(-1), QQ(2)))
        self.assertEqual(integrate(df), evaluate(f.component(()), (QQ(2),)) - evaluate(f.component(()), (QQ(-1),)))


class NaturalityTests(SimpleTestCase):
    """Pullbacks commute with d and respect composition"""

    OUTER = AffineMap.build([[2, 1], [0, 3]], [1, -1], 2)
    INNER = AffineMap.build([[1, -1], [2, 1]], [0, 2], 2)

    def forms(self):
        return [
            PolyForm(2, 0, {(): X**2 * Y + Y}),
            dx(X * Y) + dy(Y**2 - X),
            area_form(X + 1),
        ]

    def test_trace_commutes_with_d(self):
        """tr dω = d tr ω on a side of the triangle"""
        face = side_map((3, 0), (1, 2))
        f = PolyForm(2, 0, {(): X**2 * Y + Y})
        self.assertTrue(trace(exterior_derivative(f), face).same_form(exterior_derivative(trace(f, face))))

    def test_pullback_commutes_with_d(self):
        """φ^* dω = d φ^* ω in every degree"""
        for form in self.forms():
            with self.subTest(degree=form.degree):
                pulled = pullback_affine(self.OUTER, exterior_derivative(form))
                self.assertTrue(pulled.same_form(exterior_derivative(pullback_affine(self.OUTER, form))))

    def test_pullback_is_functorial(self):
        """(φ∘ψ)^* = ψ^* φ^*, also along a side"""
        for inner in (self.INNER, side_map((0, 0), (3, 0))):
            composite = self.OUTER.compose(inner)
            for form in self.forms():
                if form.degree > inner.source_dim:
                    continue
                with self.subTest(source=inner.source_dim, degree=form.degree):
                    direct = pullback_affine(composite, form)
                    stepwise = pullback_affine(inner, pullback_affine(self.OUTER, form))
                    self.assertTrue(direct.same_form(stepwise))


class BasisTests(SimpleTestCase):
    """Capped monomial bases and coordinates"""

    def test_basis_sizes(self):
        """Uniform caps every degree alike, graded lowers the cap by the degree"""
        self.assertEqual(len(form_basis(2, 0, 2, UNIFORM)), 6)
        self.assertEqual(len(form_basis(2, 1, 2, UNIFORM)), 12)
        self.assertEqual(len(form_basis(2, 1, 2, GRADED)), 6)
        self.assertEqual(len(form_basis(2, 2, 1, GRADED)), 1)
        self.assertEqual(len(form_basis(0, 0, 3)), 1)

    def test_coordinates_round_trip(self):
        """A form is rebuilt from its coordinates"""
        form = dx(3 * X - Y) + dy(X * Y)
        values = coordinates(form, 2)
        self.assertTrue(from_coordinates(values, 2, 1, 2).same_form(form))

    def test_coordinates_overflow(self):
        """Monomials above the cap are refused"""
        with self.assertRaises(DegreeOverflow):
            coordinates(PolyForm(2, 0, {(): X ** 3}), 2)
