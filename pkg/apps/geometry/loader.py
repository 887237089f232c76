"""
Geometry file loading.

The file is UTF-8 JSON:

    {
      "name": "three_triangles",            (optional)
      "ambient_dim": 2,
      "vertices": [[0, 0], ["1/2", 3], ...],
      "top_cells": [[0, 1, 3], ...],
      "sub_simplices": {"0,1": [0, 1], "0,1,2": [0]},
      "epsilon": {"0,1": "1/20"}            (optional)
    }

Coordinates are integers or "p/q" strings; floats are rejected. 2D top cells
are convex polygons listed counter-clockwise, 1D top cells are [left, right].
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError, field_validator
from sympy import QQ

from apps.core.exceptions import (
    DegenerateCell,
    IndexMismatch,
    NotPure,
    ParseError,
    UnsupportedDimension,
)
from apps.core.rationals import RATIONAL_PATTERN, parse_rational

from .polygons import Point, collinear_overlap, is_convex, point_on_segment, signed_area
from .simplices import MultiIndex, SimplicialGeometry, format_multi_index, parse_multi_index

logger = logging.getLogger(__name__)

Coordinate = Union[StrictInt, StrictStr]


class GeometryDocument(BaseModel):
    """Schema of a geometry file."""

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    ambient_dim: StrictInt
    vertices: List[List[Coordinate]]
    top_cells: List[List[StrictInt]]
    sub_simplices: Dict[str, List[StrictInt]] = {}
    epsilon: Dict[str, Coordinate] = {}

    @field_validator("vertices")
    @classmethod
    def coordinates_are_rational(cls, value):
        for point in value:
            for coord in point:
                if isinstance(coord, str) and not RATIONAL_PATTERN.match(coord):
                    raise ValueError(f"coordinate {coord!r} is not an integer or p/q string")
        return value

    @field_validator("sub_simplices", "epsilon")
    @classmethod
    def keys_are_multi_indices(cls, value):
        for key in value:
            try:
                parse_multi_index(key)
            except ValueError:
                raise ValueError(f"{key!r} is not a comma-joined multi-index")
        return value


class GeometryLoader:
    """Turns a parsed document into a validated SimplicialGeometry."""

    SUPPORTED_DIMENSIONS = (1, 2)

    def __init__(self):
        self.logger = logging.getLogger(f"{__name__}.GeometryLoader")

    def load_text(self, text: str) -> SimplicialGeometry:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"geometry is not valid JSON: {exc}") from exc
        try:
            document = GeometryDocument.model_validate(payload)
        except ValidationError as exc:
            raise ParseError(f"geometry does not match the file format: {exc.errors()[0]['msg']}") from exc
        return self.build(document)

    def build(self, document: GeometryDocument) -> SimplicialGeometry:
        n = document.ambient_dim
        if n not in self.SUPPORTED_DIMENSIONS:
            raise UnsupportedDimension(f"ambient dimension {n} is not supported")
        vertices = self._read_vertices(document.vertices, n)
        if not document.top_cells:
            raise NotPure("geometry has no top cells")
        top_cells = [tuple(cell) for cell in document.top_cells]
        for cell in top_cells:
            self._check_vertex_refs(cell, len(vertices))
        labels: Dict[MultiIndex, tuple] = {}
        for key, simplex in document.sub_simplices.items():
            index = parse_multi_index(key)
            if index in labels:
                raise IndexMismatch(f"multi-index {key} is labelled twice")
            self._check_vertex_refs(simplex, len(vertices))
            labels[index] = tuple(simplex)
        epsilon = {parse_multi_index(k): parse_rational(v) for k, v in document.epsilon.items()}

        geometry = SimplicialGeometry(n, vertices, top_cells, labels, document.name or "", epsilon)
        self._check_top_cells(geometry)
        self._check_labels(geometry)
        for index, value in epsilon.items():
            if index not in labels:
                raise IndexMismatch(f"epsilon given for unlabelled multi-index {format_multi_index(index)}")
            if value <= 0:
                raise ParseError(f"epsilon for {format_multi_index(index)} must be positive")
        self.logger.info("Loaded geometry %r: %s", geometry.name, geometry.summary())
        return geometry

    def _read_vertices(self, raw: List[List[object]], n: int) -> List[Point]:
        vertices = []
        for k, point in enumerate(raw):
            if len(point) != n:
                raise ParseError(f"vertex {k} has {len(point)} coordinates, expected {n}")
            vertices.append(tuple(parse_rational(c) for c in point))
        if len(set(vertices)) != len(vertices):
            raise ParseError("duplicate vertex coordinates")
        return vertices

    @staticmethod
    def _check_vertex_refs(simplex, count: int) -> None:
        for v in simplex:
            if not 0 <= v < count:
                raise ParseError(f"vertex index {v} out of range")

    def _check_top_cells(self, geometry: SimplicialGeometry) -> None:
        for a, cell in enumerate(geometry.top_cells):
            pts = [geometry.vertices[v] for v in cell]
            if geometry.ambient_dim == 1:
                if len(cell) != 2:
                    raise ParseError(f"1D top cell {a} must list two vertices")
                if pts[1][0] <= pts[0][0]:
                    raise DegenerateCell(f"1D top cell {a} must run left to right with positive length")
            else:
                if len(cell) < 3:
                    raise ParseError(f"2D top cell {a} needs at least three vertices")
                if signed_area(pts) <= 0 or not is_convex(pts):
                    raise DegenerateCell(f"top cell {a} is not a counter-clockwise convex polygon")

    def _faces_containing(self, geometry: SimplicialGeometry, points: List[Point]) -> List[int]:
        cells = []
        for a in range(len(geometry.top_cells)):
            if self._is_face(geometry, a, points):
                cells.append(a)
        return cells

    @staticmethod
    def _is_face(geometry: SimplicialGeometry, a: int, points: List[Point]) -> bool:
        cell = [geometry.vertices[v] for v in geometry.top_cells[a]]
        if geometry.ambient_dim == 1 or len(points) == 1:
            if geometry.ambient_dim == 1:
                return points[0] in cell
            p = points[0]
            return any(point_on_segment(p, u, w) for u, w in zip(cell, cell[1:] + cell[:1]))
        p, q = points
        covered = sum(
            (collinear_overlap((p, q), (u, w)) for u, w in zip(cell, cell[1:] + cell[:1])),
            QQ(0),
        )
        return covered == 1

    def _check_labels(self, geometry: SimplicialGeometry) -> None:
        n = geometry.ambient_dim
        for index, simplex in geometry.sub_simplices.items():
            key = format_multi_index(index)
            if any(not 0 <= a < len(geometry.top_cells) for a in index) or len(index) < 2:
                raise IndexMismatch(f"multi-index {key} does not name at least two top cells")
            if len(simplex) != n - len(index) + 2:
                raise IndexMismatch(
                    f"multi-index {key} of length {len(index)} labels a simplex with {len(simplex)} vertices"
                )
            if len(simplex) == 2 and geometry.vertices[simplex[0]] == geometry.vertices[simplex[1]]:
                raise DegenerateCell(f"labelled edge {key} has zero length")
            cells = self._faces_containing(geometry, [geometry.vertices[v] for v in simplex])
            if not cells:
                raise NotPure(f"labelled simplex {key} is not a face of any top cell")
            if tuple(cells) != index:
                raise IndexMismatch(
                    f"labelled simplex {key} is a face of top cells {format_multi_index(cells)}"
                )
            for l in range(len(index)):
                face = index[:l] + index[l + 1:]
                if len(face) > 1 and face not in geometry.sub_simplices:
                    raise IndexMismatch(f"multi-index {key} has unlabelled face {format_multi_index(face)}")
            if len(simplex) == 2:
                geometry.edge_length(index)


def load_geometry(text: str) -> SimplicialGeometry:
    return GeometryLoader().load_text(text)


def load_geometry_file(path: Union[str, Path]) -> SimplicialGeometry:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read geometry file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"geometry file {path} is not UTF-8: {exc}") from exc
    return load_geometry(text)


def load_fixture(name: str) -> SimplicialGeometry:
    """Load ``<name>.json`` from the DERHAM_FIXTURE_DIR library."""
    from django.conf import settings

    return load_geometry_file(Path(settings.DERHAM_FIXTURE_DIR) / f"{name}.json")
