"""
Simplicial geometries and their multi-index bookkeeping.

Top cells carry the singleton multi-indices (a,). A labelled lower-dimensional
simplex carries the sorted tuple of the top cells sharing it. Each object
Ω_i has a chart: top cells use ambient coordinates, edges use arclength from
their first listed vertex, points use the empty chart.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ

from apps.core.exceptions import IrrationalMeasure, NotAFace
from apps.core.rationals import rational_sqrt

from .affine import AffineMap
from .polygons import Interval, Point, PointCell, Polygon, dot, vec_scale, vec_sub

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


def parse_multi_index(text: str) -> MultiIndex:
    return tuple(sorted(int(part) for part in text.split(",")))


def format_multi_index(index: Sequence[int]) -> str:
    return ",".join(str(i) for i in index)


def omit(index: MultiIndex, position: int) -> MultiIndex:
    return index[:position] + index[position + 1:]


@dataclass
class MultiIndexSet:
    """I^p per level plus the containment relations used by δ and the norms."""
    levels: Dict[int, List[MultiIndex]]

    @classmethod
    def from_indices(cls, indices: Sequence[MultiIndex]) -> "MultiIndexSet":
        levels: Dict[int, List[MultiIndex]] = {}
        for index in indices:
            levels.setdefault(len(index) - 1, []).append(tuple(index))
        return cls({p: sorted(set(members)) for p, members in sorted(levels.items())})

    @cached_property
    def all(self) -> List[MultiIndex]:
        return [i for p in sorted(self.levels) for i in self.levels[p]]

    @cached_property
    def _known(self) -> set:
        return set(self.all)

    def __contains__(self, index: MultiIndex) -> bool:
        return tuple(index) in self._known

    def level(self, p: int) -> List[MultiIndex]:
        return self.levels.get(p, [])

    @property
    def top_level(self) -> int:
        return max(self.levels) if self.levels else -1

    def containing(self, index: MultiIndex) -> List[MultiIndex]:
        """I_i: labelled multi-indices strictly containing ``index``."""
        members = set(index)
        return [m for m in self.all if len(m) > len(index) and members.issubset(m)]

    def plus(self, index: MultiIndex) -> List[MultiIndex]:
        """I_{i,+} = I_i ∪ {i}."""
        return [tuple(index)] + self.containing(index)

    def cofaces(self, index: MultiIndex) -> List[MultiIndex]:
        return [m for m in self.containing(index) if len(m) == len(index) + 1]

    def faces(self, index: MultiIndex) -> List[MultiIndex]:
        return [omit(index, l) for l in range(len(index)) if omit(index, l) in self]


@dataclass
class SimplicialGeometry:
    ambient_dim: int
    vertices: List[Point]
    top_cells: List[Tuple[int, ...]]
    sub_simplices: Dict[MultiIndex, Tuple[int, ...]]
    name: str = ""
    epsilon: Dict[MultiIndex, object] = field(default_factory=dict)

    @cached_property
    def index_set(self) -> MultiIndexSet:
        indices = [(a,) for a in range(len(self.top_cells))] + list(self.sub_simplices)
        return MultiIndexSet.from_indices(indices)

    @property
    def labels(self) -> List[MultiIndex]:
        return self.index_set.all

    def vertex_indices(self, index: MultiIndex) -> Tuple[int, ...]:
        if len(index) == 1:
            return self.top_cells[index[0]]
        return self.sub_simplices[tuple(index)]

    def points(self, index: MultiIndex) -> List[Point]:
        return [self.vertices[v] for v in self.vertex_indices(index)]

    def simplex_dim(self, index: MultiIndex) -> int:
        return self.ambient_dim - (len(index) - 1)

    def top_cell(self, a: int):
        """Ω_a in ambient coordinates."""
        pts = [self.vertices[v] for v in self.top_cells[a]]
        if self.ambient_dim == 1:
            return Interval(pts[0][0], pts[1][0])
        return Polygon(tuple(pts))

    def edge_length(self, index: MultiIndex):
        a, b = self.points(index)
        d = vec_sub(b, a)
        length = rational_sqrt(dot(d, d))
        if length is None:
            raise IrrationalMeasure(f"edge {format_multi_index(index)} has irrational length")
        return length

    def origin(self, index: MultiIndex) -> Point:
        if len(index) == 1:
            return tuple(QQ(0) for _ in range(self.ambient_dim))
        return self.points(index)[0]

    def frame(self, index: MultiIndex) -> List[Point]:
        """Orthonormal columns spanning the chart directions, in ambient coordinates."""
        dim = self.simplex_dim(index)
        if len(index) == 1:
            return [tuple(QQ(1) if i == j else QQ(0) for i in range(self.ambient_dim)) for j in range(dim)]
        if dim == 0:
            return []
        a, b = self.points(index)
        return [vec_scale(vec_sub(b, a), 1 / self.edge_length(index))]

    def tangent(self, index: MultiIndex) -> Point:
        return self.frame(index)[0]

    @cached_property
    def _charts(self) -> Dict[MultiIndex, object]:
        charts = {}
        for index in self.labels:
            dim = self.simplex_dim(index)
            if len(index) == 1:
                charts[index] = self.top_cell(index[0])
            elif dim == 1:
                charts[index] = Interval(QQ(0), self.edge_length(index))
            else:
                charts[index] = PointCell(index)
        return charts

    def chart(self, index: MultiIndex):
        """The cell Ω_i in its own chart coordinates."""
        return self._charts[tuple(index)]

    def embedding(self, index: MultiIndex) -> AffineMap:
        """Chart of Ω_i into ambient coordinates."""
        frame = self.frame(index)
        linear = [[col[r] for col in frame] for r in range(self.ambient_dim)]
        return AffineMap.build(linear, self.origin(index), len(frame), self.chart(index), None)

    def inclusion(self, lower: MultiIndex, upper: MultiIndex) -> AffineMap:
        """Chart of Ω_upper into the chart of Ω_lower, for lower ⊂ upper.

        With orthonormal frames this is F_lᵀ F_u s + F_lᵀ(o_u - o_l).
        """
        lower, upper = tuple(lower), tuple(upper)
        if not set(lower).issubset(upper):
            raise NotAFace(f"{upper} does not label a face of {lower}")
        f_low, f_up = self.frame(lower), self.frame(upper)
        shift = vec_sub(self.origin(upper), self.origin(lower))
        linear = [[dot(fl, fu) for fu in f_up] for fl in f_low]
        translation = [dot(fl, shift) for fl in f_low]
        return AffineMap.build(linear, translation, len(f_up), self.chart(upper), self.chart(lower))

    def inward_normal(self, edge: MultiIndex, cell: int) -> Point:
        """Unit normal of a labelled edge (or 1D point) pointing into top cell ``cell``."""
        if self.ambient_dim == 1:
            (v,) = self.points(edge)
            lo, hi = self.top_cell(cell).lo, self.top_cell(cell).hi
            return (QQ(1),) if v[0] == lo else (QQ(-1),) if v[0] == hi else (QQ(0),)
        t = self.tangent(edge)
        normal = (-t[1], t[0])
        centre = _centroid(self.top_cell(cell).vertices)
        if dot(normal, vec_sub(centre, self.origin(edge))) < 0:
            normal = (t[1], -t[0])
        return normal

    def summary(self) -> Dict[str, int]:
        return {
            "ambient_dim": self.ambient_dim,
            "top_cells": len(self.top_cells),
            **{f"level_{p}": len(members) for p, members in self.index_set.levels.items()},
        }


def _centroid(points: Sequence[Point]) -> Point:
    n = len(points)
    return tuple(sum((p[k] for p in points), QQ(0)) / n for k in range(len(points[0])))


def resolve_epsilon(geometry: SimplicialGeometry, default, overrides: Optional[Dict[MultiIndex, object]] = None):
    """Half-width per labelled lower-dimensional simplex."""
    merged = dict(geometry.epsilon)
    merged.update(overrides or {})
    return {
        index: QQ.convert(merged.get(index, default))
        for index in geometry.labels
        if len(index) > 1
    }


def euler_characteristic(geometry: SimplicialGeometry) -> int:
    """V - E + F of the cell complex, splitting cell sides at every vertex lying on them."""
    if geometry.ambient_dim == 1:
        used = {v for cell in geometry.top_cells for v in cell}
        return len(used) - len(geometry.top_cells)
    used = {v for cell in geometry.top_cells for v in cell}
    edges = set()
    for cell in geometry.top_cells:
        pts = [geometry.vertices[v] for v in cell]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            d = vec_sub(b, a)
            dd = dot(d, d)
            stops = sorted(
                dot(vec_sub(p, a), d) / dd
                for p in geometry.vertices
                if d[0] * (p[1] - a[1]) == d[1] * (p[0] - a[0]) and 0 <= dot(vec_sub(p, a), d) <= dd
            )
            points = [tuple(a[k] + d[k] * s for k in range(2)) for s in stops]
            for u, w in zip(points, points[1:]):
                edges.add(frozenset((u, w)))
    return len(used) - len(edges) + len(geometry.top_cells)
