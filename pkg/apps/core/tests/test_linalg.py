"""
Tests for exact sparse linear algebra and rational parsing
"""

from django.test import SimpleTestCase
from sympy import QQ

from apps.core import linalg
from apps.core.exceptions import ParseError, SingularGram
from apps.core.rationals import format_rational, parse_rational, rational_sqrt


class RationalParsingTests(SimpleTestCase):
    """Scalars in and out of the "p/q" text form"""

    def test_parse_fraction_and_integer(self):
        """Fractions are reduced, integers accepted as-is"""
        self.assertEqual(parse_rational("6/4"), QQ(3, 2))
        self.assertEqual(parse_rational(-7), QQ(-7))
        self.assertEqual(parse_rational(" -1 / 3 "), QQ(-1, 3))

    def test_floats_are_rejected(self):
        """Floating-point input never becomes a rational"""
        with self.assertRaises(ParseError):
            parse_rational(0.5)
        with self.assertRaises(ParseError):
            parse_rational("0.5")

    def test_zero_denominator(self):
        """A zero denominator is a parse error"""
        with self.assertRaises(ParseError):
            parse_rational("1/0")

    def test_format_always_has_denominator(self):
        """Formatting writes p/q even for integers"""
        self.assertEqual(format_rational(QQ(3)), "3/1")
        self.assertEqual(format_rational(QQ(-2, 6)), "-1/3")

    def test_rational_sqrt(self):
        """Square roots stay exact or are reported missing"""
        self.assertEqual(rational_sqrt(QQ(25, 4)), QQ(5, 2))
        self.assertIsNone(rational_sqrt(QQ(2)))


class NullSpaceTests(SimpleTestCase):
    """Echelon kernels and column-space membership"""

    def setUp(self):
        self.a = linalg.from_rows([[1, 2, 3], [2, 4, 6]])

    def test_nullspace_dimension_and_identity_rows(self):
        """Free-column rows of the kernel basis form an identity"""
        kernel = linalg.nullspace(self.a)
        self.assertEqual(kernel.dimension, 2)
        self.assertEqual(kernel.free_columns, [1, 2])
        self.assertTrue(linalg.is_zero(linalg.matmul(self.a, kernel.basis)))
        identity = linalg.select_rows(kernel.basis, kernel.free_columns)
        self.assertEqual(linalg.to_rows(identity), [[1, 0], [0, 1]])

    def test_rank(self):
        """Rank is the pivot count"""
        self.assertEqual(linalg.rank(self.a), 1)
        self.assertEqual(linalg.rank(linalg.zeros((3, 2))), 0)

    def test_in_column_space(self):
        """Membership is decided exactly"""
        basis = linalg.from_rows([[1], [2]])
        self.assertTrue(linalg.in_column_space(basis, linalg.column([QQ(1, 2), 1])))
        self.assertFalse(linalg.in_column_space(basis, linalg.column([1, 3])))

    def test_solve_singular(self):
        """A singular square system raises"""
        with self.assertRaises(SingularGram):
            linalg.solve(linalg.from_rows([[1, 1], [1, 1]]), linalg.column([1, 2]))

    def test_least_norm_solution(self):
        """The least-norm solution lies in the row space"""
        a = linalg.from_rows([[1, 1]])
        x = linalg.least_norm_solution(a, linalg.column([2]))
        self.assertEqual(linalg.column_values(x, 0), [1, 1])
        inconsistent = linalg.from_rows([[1, 1], [1, 1]])
        self.assertIsNone(linalg.least_norm_solution(inconsistent, linalg.column([1, 2])))

    def test_positive_definite(self):
        """The LDL sweep detects the first bad pivot"""
        self.assertTrue(linalg.is_positive_definite(linalg.from_rows([[2, 1], [1, 2]])))
        self.assertEqual(linalg.positive_definite_failure(linalg.from_rows([[1, 2], [2, 1]])), 1)
        self.assertEqual(linalg.positive_definite_failure(linalg.from_rows([[1, 2], [0, 1]])), -1)

    def test_block_diagonal_and_stacks(self):
        """Blocks land on the diagonal with zero padding"""
        m = linalg.block_diagonal([linalg.from_rows([[1]]), linalg.from_rows([[2, 3]])])
        self.assertEqual(linalg.to_rows(m), [[1, 0, 0], [0, 2, 3]])
        self.assertEqual(linalg.hstack([], 2).shape, (2, 0))
