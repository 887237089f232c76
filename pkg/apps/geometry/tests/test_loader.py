"""
Tests for geometry loading, permissibility and the random generator
"""

import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase
from sympy import QQ

from apps.core.exceptions import IndexMismatch, ParseError, UnsupportedDimension
from apps.geometry.generator import TriangleGenerator, is_fat, random_document, random_geometry, unit_directions
from apps.geometry.loader import load_fixture, load_geometry, load_geometry_file
from apps.geometry.permissibility import EXTENDS, INDEX_MATCH, validate_permissibility
from apps.geometry.simplices import euler_characteristic, format_multi_index, parse_multi_index


class GeometryLoaderTests(SimpleTestCase):
    """Parsing geometry files into SimplicialGeometry"""

    def test_three_triangles(self):
        """The junction fixture has three cells, three edges and one point"""
        g = load_fixture("three_triangles")
        self.assertEqual(g.ambient_dim, 2)
        self.assertEqual([len(g.index_set.level(p)) for p in range(3)], [3, 3, 1])
        self.assertEqual(g.simplex_dim((0, 1, 2)), 0)
        self.assertEqual(g.simplex_dim((0, 1)), 1)
        self.assertEqual(g.edge_length((0, 1)), 5)
        self.assertEqual(g.edge_length((0, 2)), 5)

    def test_index_set_queries(self):
        """Containing sets, cofaces and faces follow inclusion"""
        index_set = load_fixture("three_triangles").index_set
        self.assertEqual(index_set.containing((0,)), [(0, 1), (0, 2), (0, 1, 2)])
        self.assertEqual(index_set.plus((0, 1)), [(0, 1), (0, 1, 2)])
        self.assertEqual(index_set.cofaces((0,)), [(0, 1), (0, 2)])
        self.assertEqual(index_set.faces((0, 1, 2)), [(1, 2), (0, 2), (0, 1)])

    def test_multi_index_text(self):
        """Multi-indices are written comma separated and read back sorted"""
        self.assertEqual(parse_multi_index("2,0"), (0, 2))
        self.assertEqual(format_multi_index((0, 1, 2)), "0,1,2")

    def test_two_segments(self):
        """1D cells are intervals, the label is their common point"""
        g = load_fixture("two_segments")
        self.assertEqual(g.ambient_dim, 1)
        self.assertEqual(g.top_cell(1).lo, 1)
        self.assertEqual(g.simplex_dim((0, 1)), 0)

    def test_float_coordinate_rejected(self):
        """Floats in the file are a parse error"""
        with self.assertRaises(ParseError):
            load_fixture("malformed")

    def test_invalid_json(self):
        """Text that is not JSON is a parse error"""
        with self.assertRaises(ParseError):
            load_geometry("{not json")

    def test_non_utf8_file(self):
        """A 0xFF byte is a parse error, not a decode error"""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.json"
            path.write_bytes(b"\xff\xfe{}")
            with self.assertRaises(ParseError):
                load_geometry_file(path)

    def test_rational_strings(self):
        """Coordinates may be p/q strings"""
        g = load_geometry(json.dumps({
            "ambient_dim": 1,
            "vertices": [[0], ["1/2"], [2]],
            "top_cells": [[0, 1], [1, 2]],
            "sub_simplices": {"0,1": [1]},
            "epsilon": {"0,1": "1/20"},
        }))
        self.assertEqual(g.vertices[1], (QQ(1, 2),))
        self.assertEqual(g.epsilon[(0, 1)], QQ(1, 20))

    def test_unsupported_dimension(self):
        """Only 1D and 2D geometries are built"""
        with self.assertRaises(UnsupportedDimension):
            load_geometry(json.dumps({
                "ambient_dim": 3,
                "vertices": [[0, 0, 0]],
                "top_cells": [[0]],
                "sub_simplices": {},
            }))

    def test_label_on_wrong_cells(self):
        """A label must name exactly the cells sharing the simplex"""
        with self.assertRaises(IndexMismatch):
            load_geometry(json.dumps({
                "ambient_dim": 1,
                "vertices": [[0], [1], [2], [3]],
                "top_cells": [[0, 1], [1, 2], [2, 3]],
                "sub_simplices": {"0,2": [1]},
            }))


class PermissibilityTests(SimpleTestCase):
    """Checks against the permissibility rules"""

    def test_fixtures_are_permissible(self):
        """Positive fixtures pass every rule"""
        for name in ("three_triangles", "two_segments", "annulus"):
            with self.subTest(name=name):
                self.assertTrue(validate_permissibility(load_fixture(name)).passed)

    def test_missing_label(self):
        """A shared edge without a label breaks index matching"""
        report = validate_permissibility(load_fixture("missing_label"))
        self.assertFalse(report.passed)
        self.assertIn(INDEX_MATCH, report.rules_failed())
        self.assertEqual(report.first().simplex, "0,1")

    def test_interior_endpoint(self):
        """An interface ending inside the domain does not extend to the boundary"""
        report = validate_permissibility(load_fixture("interior_endpoint"))
        self.assertFalse(report.passed)
        self.assertIn(EXTENDS, report.rules_failed())


class EulerCharacteristicTests(SimpleTestCase):
    """V - E + F of the fixtures"""

    def test_contractible_fixtures(self):
        """Disc-like fixtures have characteristic one"""
        self.assertEqual(euler_characteristic(load_fixture("three_triangles")), 1)
        self.assertEqual(euler_characteristic(load_fixture("two_segments")), 1)

    def test_annulus(self):
        """One hole lowers the characteristic to zero"""
        self.assertEqual(euler_characteristic(load_fixture("annulus")), 0)


class GeneratorTests(SimpleTestCase):
    """Seeded triangle geometries"""

    def test_random_geometries_are_permissible(self):
        """Every generated geometry is 4-8 triangles and passes the permissibility rules"""
        for seed in (1, 2, 3):
            with self.subTest(seed=seed):
                g = random_geometry(seed)
                self.assertTrue(4 <= len(g.top_cells) <= 8)
                self.assertTrue(all(len(cell) == 3 for cell in g.top_cells))
                self.assertTrue(validate_permissibility(g).passed)

    def test_labelled_edges_have_rational_length(self):
        """Generated interfaces run along Pythagorean directions"""
        for seed in (1, 2, 3):
            g = random_geometry(seed)
            for index in g.labels:
                if len(index) == 2:
                    self.assertGreater(g.edge_length(index), 0)

    def test_junctions_are_three_cells(self):
        """No vertex is shared by more than three triangles"""
        doc = random_document(2, cells=8)
        for key in doc["sub_simplices"]:
            self.assertLessEqual(len(parse_multi_index(key)), 3)
        self.assertEqual(len(doc["top_cells"]), 8)

    def test_seed_determinism(self):
        """The same seed yields the same document"""
        self.assertEqual(random_document(11), random_document(11))

    def test_cell_count_bounds(self):
        """Requested counts outside [4, 8] are refused"""
        with self.assertRaises(ValueError):
            TriangleGenerator(0, cells=9)
        self.assertEqual(len(TriangleGenerator(5, cells=6).grow()), 6)

    def test_unit_directions(self):
        """Every direction used for a new segment has length one"""
        for d in unit_directions():
            self.assertEqual(d[0] ** 2 + d[1] ** 2, 1)

    def test_fatness(self):
        """Slivers are refused"""
        self.assertTrue(is_fat([(QQ(0), QQ(0)), (QQ(4), QQ(0)), (QQ(0), QQ(3))]))
        self.assertFalse(is_fat([(QQ(0), QQ(0)), (QQ(10), QQ(0)), (QQ(5), QQ(1))]))
