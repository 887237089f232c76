"""
Random permissible triangle geometries.

A seed triangle is grown by two moves until it has the requested number of
cells:

    split   a corner that belongs to no other cell is joined to a fresh point
            on the opposite side; if that side is shared the point becomes a
            T-junction of three cells
    attach  a triangle is glued to the middle part of a free side

Every new segment runs along a Pythagorean direction, so every labelled edge
has a rational length. A split uses up a free corner and an attachment adds
one, so no boundary vertex ever lies in more than two cells and every point
shared by three cells is an interior junction.
"""

import json
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import QQ

from apps.core.rationals import format_rational, rational_sqrt

from .loader import load_geometry
from .polygons import (
    Point,
    collinear_overlap,
    cross,
    dot,
    overlap_area,
    point_on_segment,
    segment_meets_convex,
    signed_area,
    vec_add,
    vec_scale,
    vec_sub,
)
from .simplices import SimplicialGeometry, format_multi_index

logger = logging.getLogger(__name__)

Cell = Tuple[int, int, int]

TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25))
# (cos, sin) of the base angles of an attached triangle
BASE_ANGLES = ((QQ(3, 5), QQ(4, 5)), (QQ(4, 5), QQ(3, 5)))
SPLIT_FRACTIONS = (QQ(1, 4), QQ(3, 4))
ATTACH_FRACTIONS = ((QQ(1, 4), QQ(3, 4)), (QQ(1, 3), QQ(2, 3)), (QQ(1, 4), QQ(2, 3)))


def unit_directions() -> List[Point]:
    """Rational unit vectors: the axes and the rotations of a few Pythagorean triples."""
    directions = {(QQ(1), QQ(0)), (QQ(-1), QQ(0)), (QQ(0), QQ(1)), (QQ(0), QQ(-1))}
    for a, b, c in TRIPLES:
        for x, y in ((a, b), (b, a)):
            for sx in (1, -1):
                for sy in (1, -1):
                    directions.add((QQ(sx * x, c), QQ(sy * y, c)))
    return sorted(directions)


def is_rational_direction(d: Point) -> bool:
    return rational_sqrt(dot(d, d)) is not None


def is_fat(points) -> bool:
    """Every height is at least a third of the longest side."""
    area = signed_area(points)
    longest = max(dot(vec_sub(q, p), vec_sub(q, p)) for p, q in zip(points, points[1:] + points[:1]))
    return area > 0 and 6 * area >= longest


class TriangleGenerator:
    MIN_CELLS = 4
    MAX_CELLS = 8
    ATTEMPTS = 400
    SEED_TRIANGLE = ((0, 0), (48, 0), (24, 32))

    def __init__(self, seed: int, cells: Optional[int] = None):
        self.rng = np.random.default_rng(seed)
        self.seed = seed
        self.target = cells if cells is not None else int(self.rng.integers(self.MIN_CELLS, self.MAX_CELLS + 1))
        if not self.MIN_CELLS <= self.target <= self.MAX_CELLS:
            raise ValueError(f"cell count must lie in [{self.MIN_CELLS}, {self.MAX_CELLS}]")
        self.directions = unit_directions()
        self.vertices: List[Point] = [(QQ(x), QQ(y)) for x, y in self.SEED_TRIANGLE]
        self.cells: List[Cell] = [(0, 1, 2)]
        self.logger = logging.getLogger(f"{__name__}.TriangleGenerator")

    # -- incidence

    def points(self, cell: Cell) -> List[Point]:
        return [self.vertices[v] for v in cell]

    def sides(self, cell: Cell) -> List[Tuple[Point, Point]]:
        pts = self.points(cell)
        return list(zip(pts, pts[1:] + pts[:1]))

    def touching(self, point: Point) -> List[int]:
        return [a for a, cell in enumerate(self.cells) if any(point_on_segment(point, u, w) for u, w in self.sides(cell))]

    def free_side(self, a: int, side: Tuple[Point, Point]) -> bool:
        """No other cell shares any part of the side or has a vertex inside it."""
        for b, cell in enumerate(self.cells):
            if b == a:
                continue
            if any(collinear_overlap(side, other) > 0 for other in self.sides(cell)):
                return False
            if any(point_on_segment(p, *side, strict=True) for p in self.points(cell)):
                return False
        return True

    def _vertex(self, point: Point) -> int:
        if point in self.vertices:
            raise ValueError("point is not fresh")
        self.vertices.append(point)
        return len(self.vertices) - 1

    # -- moves

    def split(self) -> bool:
        """Join a free corner to its opposite side along a rational direction."""
        options = []
        for a, cell in enumerate(self.cells):
            for k, v in enumerate(cell):
                if len(self.touching(self.vertices[v])) == 1:
                    options.append((a, k))
        if not options:
            return False
        a, k = options[int(self.rng.integers(0, len(options)))]
        cell = self.cells[a]
        apex, left, right = cell[k], cell[(k + 1) % 3], cell[(k + 2) % 3]
        p, b, c = self.vertices[apex], self.vertices[left], self.vertices[right]
        base = vec_sub(c, b)
        hits = []
        for u in self.directions:
            denom = cross(base, u)
            if denom == 0:
                continue
            # p + s u = b + t (c - b)
            t = cross(vec_sub(p, b), u) / denom
            if SPLIT_FRACTIONS[0] <= t <= SPLIT_FRACTIONS[1]:
                hits.append(vec_add(b, vec_scale(base, t)))
        hits = [h for h in hits if h not in self.vertices and is_fat([p, b, h]) and is_fat([p, h, c])]
        if not hits:
            return False
        foot = hits[int(self.rng.integers(0, len(hits)))]
        d = self._vertex(foot)
        self.cells[a:a + 1] = [(apex, left, d), (apex, d, right)]
        return True

    def attach(self) -> bool:
        """Glue a triangle with 3-4-5 base angles onto the middle of a free side."""
        options = []
        for a, cell in enumerate(self.cells):
            for side in self.sides(cell):
                if is_rational_direction(vec_sub(side[1], side[0])) and self.free_side(a, side):
                    options.append((a, side))
        if not options:
            return False
        a, (b, c) = options[int(self.rng.integers(0, len(options)))]
        lo, hi = ATTACH_FRACTIONS[int(self.rng.integers(0, len(ATTACH_FRACTIONS)))]
        (c1, s1), (c2, s2) = (BASE_ANGLES[int(self.rng.integers(0, 2))] for _ in range(2))
        d = vec_sub(c, b)
        start, end = vec_add(b, vec_scale(d, lo)), vec_add(b, vec_scale(d, hi))
        # the host lies to the left of b -> c, so turn clockwise from d and counter-clockwise from -d
        out_start = (c1 * d[0] + s1 * d[1], -s1 * d[0] + c1 * d[1])
        out_end = (-c2 * d[0] + s2 * d[1], -s2 * d[0] - c2 * d[1])
        s = cross(vec_sub(end, start), out_end) / cross(out_start, out_end)
        apex = vec_add(start, vec_scale(out_start, s))
        triangle = [end, start, apex]
        if not is_fat(triangle) or not self._clear(a, triangle):
            return False
        if any(p in self.vertices for p in triangle):
            return False
        self.cells.append((self._vertex(end), self._vertex(start), self._vertex(apex)))
        return True

    def _clear(self, host: int, triangle: List[Point]) -> bool:
        """The triangle, grown by half about its centroid, misses every cell but the host."""
        centre = vec_scale(vec_add(vec_add(triangle[0], triangle[1]), triangle[2]), QQ(1, 3))
        grown = [vec_add(centre, vec_scale(vec_sub(p, centre), QQ(3, 2))) for p in triangle]
        for b, cell in enumerate(self.cells):
            if b == host:
                continue
            if overlap_area(self.points(cell), triangle) > 0:
                return False
            if any(segment_meets_convex(u, w, grown) for u, w in self.sides(cell)):
                return False
        return True

    def grow(self) -> List[Cell]:
        for _ in range(self.ATTEMPTS):
            if len(self.cells) == self.target:
                break
            move = self.split if self.rng.random() < 0.5 else self.attach
            if move():
                self.logger.debug("%s: %d triangles", move.__name__, len(self.cells))
        if len(self.cells) != self.target:
            raise ValueError(f"could not grow {self.target} triangles from seed {self.seed}")
        return self.cells

    # -- output

    def document(self) -> Dict[str, object]:
        self.grow()
        index = {p: k for k, p in enumerate(self.vertices)}
        labels: Dict[str, List[int]] = {}
        for a in range(len(self.cells)):
            for b in range(a + 1, len(self.cells)):
                shared = self._shared_segment(a, b)
                if shared:
                    labels[format_multi_index((a, b))] = [index[shared[0]], index[shared[1]]]
        for p in self.vertices:
            touching = self.touching(p)
            if len(touching) > 3:
                raise ValueError(f"{len(touching)} triangles meet at {p}")
            if len(touching) == 3:
                labels[format_multi_index(touching)] = [index[p]]
        return {
            "name": f"triangles_{self.seed}",
            "ambient_dim": 2,
            "vertices": [[format_rational(x), format_rational(y)] for x, y in self.vertices],
            "top_cells": [list(cell) for cell in self.cells],
            "sub_simplices": labels,
        }

    def _shared_segment(self, a: int, b: int) -> Optional[Tuple[Point, Point]]:
        for p0, p1 in self.sides(self.cells[a]):
            for q0, q1 in self.sides(self.cells[b]):
                if collinear_overlap((p0, p1), (q0, q1)) == 0:
                    continue
                d = vec_sub(p1, p0)
                ends = sorted([p0, p1, q0, q1], key=lambda p: dot(vec_sub(p, p0), d))
                return ends[1], ends[2]
        return None


def random_document(seed: int, cells: Optional[int] = None) -> Dict[str, object]:
    return TriangleGenerator(seed, cells).document()


def random_geometry(seed: int, cells: Optional[int] = None) -> SimplicialGeometry:
    document = random_document(seed, cells)
    geometry = load_geometry(json.dumps(document))
    logger.info("Generated %s with %d triangles", document["name"], len(document["top_cells"]))
    return geometry
