"""
Permissibility of a loaded geometry.

A geometry is permissible when every labelled interface network reaches the
outer boundary and when every incidence of top cells (a shared edge, or a
point shared by three cells) carries exactly the label naming those cells.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from sympy import QQ

from .polygons import Point, collinear_overlap, cross, dot, point_on_segment, vec_add, vec_scale, vec_sub
from .simplices import MultiIndex, SimplicialGeometry, format_multi_index

logger = logging.getLogger(__name__)

Segment = Tuple[Point, Point]

EXTENDS = "extends_to_boundary"
INDEX_MATCH = "index_sets_match"


@dataclass
class Violation:
    rule: str
    simplex: str
    detail: str


@dataclass
class PermissibilityReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def rules_failed(self) -> Set[str]:
        return {v.rule for v in self.violations}

    def first(self):
        return self.violations[0] if self.violations else None


def _sides(points: List[Point]) -> List[Segment]:
    return list(zip(points, points[1:] + points[:1]))


def _uncovered_pieces(side: Segment, others: List[Segment]) -> List[Segment]:
    """Parts of ``side`` not overlapped by any collinear segment in ``others``."""
    p0, p1 = side
    d = vec_sub(p1, p0)
    dd = dot(d, d)
    covered: List[Tuple[object, object]] = []
    for q0, q1 in others:
        if cross(d, vec_sub(q0, p0)) or cross(d, vec_sub(q1, p0)):
            continue
        s0, s1 = dot(vec_sub(q0, p0), d) / dd, dot(vec_sub(q1, p0), d) / dd
        lo, hi = max(QQ(0), min(s0, s1)), min(QQ(1), max(s0, s1))
        if lo < hi:
            covered.append((lo, hi))
    covered.sort()
    pieces: List[Segment] = []
    cursor = QQ(0)
    for lo, hi in covered:
        if lo > cursor:
            pieces.append((vec_add(p0, vec_scale(d, cursor)), vec_add(p0, vec_scale(d, lo))))
        cursor = max(cursor, hi)
    if cursor < 1:
        pieces.append((vec_add(p0, vec_scale(d, cursor)), p1))
    return pieces


def boundary_segments(geometry: SimplicialGeometry) -> List[Segment]:
    """Segments of ∂Ω: cell sides minus their overlaps with other cells' sides."""
    cells = [[geometry.vertices[v] for v in cell] for cell in geometry.top_cells]
    segments: List[Segment] = []
    for a, points in enumerate(cells):
        others = [s for b, other in enumerate(cells) if b != a for s in _sides(other)]
        for side in _sides(points):
            segments.extend(_uncovered_pieces(side, others))
    return segments


def on_outer_boundary(geometry: SimplicialGeometry, point: Point) -> bool:
    if geometry.ambient_dim == 1:
        return sum(_cell_touches(geometry, a, point) for a in range(len(geometry.top_cells))) == 1
    return any(point_on_segment(point, a, b) for a, b in boundary_segments(geometry))


class PermissibilityChecker:
    def __init__(self, geometry: SimplicialGeometry):
        self.geometry = geometry
        self.report = PermissibilityReport()
        self.logger = logging.getLogger(f"{__name__}.PermissibilityChecker")

    def run(self) -> PermissibilityReport:
        if self.geometry.ambient_dim == 2:
            self._check_extension()
        self._check_incidence()
        if self.report.passed:
            self.logger.info("Geometry %r is permissible", self.geometry.name)
        else:
            self.logger.warning(
                "Geometry %r is not permissible: %s", self.geometry.name, self.report.first().detail
            )
        return self.report

    def _add(self, rule: str, simplex: str, detail: str) -> None:
        self.report.violations.append(Violation(rule, simplex, detail))

    def _edges(self) -> Dict[MultiIndex, Segment]:
        return {
            index: tuple(self.geometry.points(index))
            for index in self.geometry.sub_simplices
            if len(self.geometry.sub_simplices[index]) == 2
        }

    def _check_extension(self) -> None:
        edges = self._edges()
        boundary = boundary_segments(self.geometry)

        def touches_boundary(point: Point) -> bool:
            return any(point_on_segment(point, a, b) for a, b in boundary)

        endpoints: Dict[Point, List[MultiIndex]] = {}
        for index, (a, b) in edges.items():
            endpoints.setdefault(a, []).append(index)
            endpoints.setdefault(b, []).append(index)
        for point, incident in sorted(endpoints.items()):
            if len(incident) < 2 and not touches_boundary(point):
                self._add(
                    EXTENDS,
                    format_multi_index(incident[0]),
                    f"interface {format_multi_index(incident[0])} ends at interior point {point}",
                )

        # every connected interface network must reach ∂Ω
        remaining = set(edges)
        while remaining:
            seed = remaining.pop()
            component, frontier = {seed}, [seed]
            while frontier:
                current = frontier.pop()
                for point in edges[current]:
                    for other in endpoints[point]:
                        if other in remaining:
                            remaining.discard(other)
                            component.add(other)
                            frontier.append(other)
            if not any(touches_boundary(p) for index in component for p in edges[index]):
                first = min(component)
                self._add(EXTENDS, format_multi_index(first), "interface network never reaches the outer boundary")

    def _check_incidence(self) -> None:
        g = self.geometry
        labelled = {tuple(g.points(index)): index for index in g.sub_simplices}
        if g.ambient_dim == 2:
            cells = [[g.vertices[v] for v in cell] for cell in g.top_cells]
            for a in range(len(cells)):
                for b in range(a + 1, len(cells)):
                    shared = [
                        piece
                        for side in _sides(cells[a])
                        for other in _sides(cells[b])
                        for piece in [_overlap_segment(side, other)]
                        if piece is not None
                    ]
                    if shared:
                        self._check_shared_edge(a, b, shared)
        expected = g.ambient_dim + 1
        for point in g.vertices:
            incident = tuple(a for a in range(len(g.top_cells)) if _cell_touches(g, a, point))
            if len(incident) < expected:
                continue
            if len(incident) > expected:
                self._add(INDEX_MATCH, str(point), f"{len(incident)} cells meet at {point}; no label can name them")
            elif labelled.get((point,)) != incident:
                self._add(
                    INDEX_MATCH,
                    format_multi_index(incident),
                    f"cells {format_multi_index(incident)} meet at {point} without a label",
                )

    def _check_shared_edge(self, a: int, b: int, shared: List[Segment]) -> None:
        key = format_multi_index((a, b))
        if (a, b) not in self.geometry.sub_simplices:
            self._add(INDEX_MATCH, key, f"cells {a} and {b} share an unlabelled edge")
            return
        label = tuple(self.geometry.points((a, b)))
        covered = sum((collinear_overlap(label, piece) for piece in shared), QQ(0))
        inside = all(collinear_overlap(piece, label) == 1 for piece in shared)
        if covered != 1 or not inside:
            self._add(INDEX_MATCH, key, f"label {key} does not coincide with the edge shared by cells {a} and {b}")


def _overlap_segment(side: Segment, other: Segment):
    """Common sub-segment of two collinear segments, or None."""
    p0, p1 = side
    d = vec_sub(p1, p0)
    if cross(d, vec_sub(other[0], p0)) or cross(d, vec_sub(other[1], p0)):
        return None
    dd = dot(d, d)
    s0, s1 = dot(vec_sub(other[0], p0), d) / dd, dot(vec_sub(other[1], p0), d) / dd
    lo, hi = max(QQ(0), min(s0, s1)), min(QQ(1), max(s0, s1))
    if lo >= hi:
        return None
    return vec_add(p0, vec_scale(d, lo)), vec_add(p0, vec_scale(d, hi))


def _cell_touches(geometry: SimplicialGeometry, a: int, point: Point) -> bool:
    if geometry.ambient_dim == 1:
        cell = geometry.top_cell(a)
        return point[0] in (cell.lo, cell.hi)
    pts = [geometry.vertices[v] for v in geometry.top_cells[a]]
    return any(point_on_segment(point, u, w) for u, w in _sides(pts))


def validate_permissibility(geometry: SimplicialGeometry) -> PermissibilityReport:
    return PermissibilityChecker(geometry).run()
