"""
Cover arrangements.

The cover is laid out inside the geometry. Every top cell Ω_a is trimmed to
Ũ_a by moving each labelled side inwards by its half-width ε_e, and Ũ_a is
stretched back onto Ω_a. A labelled edge e = (a, b) keeps the strip between
the two trimmed sides, projected onto e, and a labelled junction keeps the
triangle left between its three strips, collapsed onto the junction point.
In 1D the bands are the intervals [v - ε, v + ε].

Pieces are cut into fragments (triangles, or intervals in 1D) on which the
projection is affine. The fragments triangulate Ω without hanging nodes, so
every ρ_{i,m} is continuous and piecewise affine. U_i is the union of the
pieces Ũ_m with m ⊇ i, hence U_J ⊆ U_i whenever i ⊆ J.

Where a strip ends at the outer boundary, or tapers into a straight side of
its neighbour, the end of the strip is a fibre of the projection. Fibres are
normal to e in the interior of the strip only when both trimmed sides end
level with each other; elsewhere they lean.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy import QQ

from apps.core.exceptions import DegenerateCell, EpsilonTooLarge, IndexMismatch, LayoutError, UnmatchedFacet

from .affine import AffineMap
from .permissibility import validate_permissibility
from .polygons import (
    Interval,
    Point,
    PointCell,
    Polygon,
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
from .simplices import MultiIndex, SimplicialGeometry, format_multi_index, resolve_epsilon

logger = logging.getLogger(__name__)


class FragmentKey(NamedTuple):
    """Part ``part`` of the piece Ũ_piece."""
    piece: MultiIndex
    part: int


def format_fragment(key: FragmentKey) -> str:
    return f"{format_multi_index(key.piece)}[{key.part}]"


def measure_of(cell) -> object:
    return cell.length if cell.dim == 1 else cell.area


def shared_measure(cell, other) -> object:
    """Measure of the intersection of two convex cells of the same dimension."""
    if cell.dim == 1:
        return max(QQ(0), min(cell.hi, other.hi) - max(cell.lo, other.lo))
    return overlap_area(cell.vertices, other.vertices)


@dataclass(frozen=True)
class Fragment:
    key: FragmentKey
    cell: object
    projection: AffineMap

    @property
    def measure(self):
        return measure_of(self.cell)


@dataclass(frozen=True)
class OrientedFacet:
    """Γ_{owner, neighbour}: a facet of ∂owner oriented as the boundary of the owner fragment.

    In 2D the facet is the segment start -> end (owner on the left). In 1D it
    is a point and ``sign`` is the outward direction of the owner there.
    """
    owner: FragmentKey
    neighbour: FragmentKey
    start: Point
    end: Point
    sign: int = 1

    def reversed(self) -> "OrientedFacet":
        if len(self.start) == 1:
            return OrientedFacet(self.neighbour, self.owner, self.start, self.end, -self.sign)
        return OrientedFacet(self.neighbour, self.owner, self.end, self.start, self.sign)

    @property
    def dim(self) -> int:
        return len(self.start) - 1

    def parameterization(self) -> AffineMap:
        """Affine map from the facet chart ([0, 1] in 2D, a point in 1D) into ambient space."""
        if self.dim == 0:
            return AffineMap.constant(0, self.start, PointCell())
        direction = vec_sub(self.end, self.start)
        return AffineMap.build([[direction[0]], [direction[1]]], self.start, 1, Interval(QQ(0), QQ(1)))

    def same_point_set(self, other: "OrientedFacet") -> bool:
        return {self.start, self.end} == {other.start, other.end}


@dataclass(frozen=True)
class InterfacePair:
    lower: FragmentKey
    upper: FragmentKey
    forward: OrientedFacet
    backward: OrientedFacet

    @property
    def crosses_pieces(self) -> bool:
        return self.lower.piece != self.upper.piece


@dataclass
class CoverArrangement:
    geometry: SimplicialGeometry
    epsilon: Dict[MultiIndex, object]
    tilde_cells: Dict[MultiIndex, object]
    fragments: Dict[FragmentKey, Fragment]
    facets: List[InterfacePair] = field(default_factory=list)

    @property
    def ambient_dim(self) -> int:
        return self.geometry.ambient_dim

    @property
    def labels(self) -> List[MultiIndex]:
        return self.geometry.labels

    @cached_property
    def _parts(self) -> Dict[MultiIndex, List[FragmentKey]]:
        parts: Dict[MultiIndex, List[FragmentKey]] = {m: [] for m in self.tilde_cells}
        for key in sorted(self.fragments):
            parts[key.piece].append(key)
        return parts

    def parts(self, piece: MultiIndex) -> List[FragmentKey]:
        """Fragments of the single piece Ũ_m."""
        return self._parts[tuple(piece)]

    def pieces(self, index: MultiIndex) -> List[FragmentKey]:
        """Fragments of the pieces Ũ_m, m ⊇ i, that make up U_i."""
        return [key for m in self.geometry.index_set.plus(tuple(index)) for key in self._parts[m]]

    def cell(self, key: FragmentKey):
        return self.fragments[key].cell

    def is_band(self, piece: MultiIndex) -> bool:
        return len(piece) > 1 and self.geometry.simplex_dim(piece) == self.ambient_dim - 1

    @property
    def bands(self) -> List[MultiIndex]:
        return [m for m in self.tilde_cells if self.is_band(m)]

    def open_set(self, index: MultiIndex) -> List[object]:
        return [self.tilde_cells[m] for m in self.geometry.index_set.plus(tuple(index))]

    @property
    def open_sets(self) -> Dict[int, List[object]]:
        return {a: self.open_set((a,)) for a in range(len(self.geometry.top_cells))}

    def measure(self, index: MultiIndex):
        return sum((self.fragments[key].measure for key in self.pieces(index)), QQ(0))

    def piece_measure(self, piece: MultiIndex):
        return sum((self.fragments[key].measure for key in self.parts(piece)), QQ(0))

    @cached_property
    def _piece_maps(self) -> Dict[Tuple[MultiIndex, FragmentKey], AffineMap]:
        maps = {}
        for i in self.labels:
            for key in self.pieces(i):
                fragment = self.fragments[key]
                outer = self.geometry.inclusion(i, key.piece)
                maps[(i, key)] = outer.compose(fragment.projection).with_domain(fragment.cell)
        return maps

    def piece_map(self, index: MultiIndex, key: FragmentKey) -> AffineMap:
        """ρ_{i,m} on one fragment of Ũ_m: the projection onto Ω_m followed by its inclusion."""
        return self._piece_maps[(tuple(index), key)]

    @property
    def interfaces(self) -> Dict[Tuple[FragmentKey, FragmentKey], OrientedFacet]:
        table = {}
        for pair in self.facets:
            table[(pair.lower, pair.upper)] = pair.forward
            table[(pair.upper, pair.lower)] = pair.backward
        return table

    def facets_inside(self, index: MultiIndex) -> List[InterfacePair]:
        members = set(self.pieces(index))
        return [p for p in self.facets if p.lower in members and p.upper in members]

    def summary(self) -> Dict[str, int]:
        return {
            "pieces": len(self.tilde_cells),
            "fragments": len(self.fragments),
            "bands": len(self.bands),
            "facets": len(self.facets),
        }


def _fan(points: Sequence[Point], images: Sequence[Point], apex: Optional[int]):
    """Fan triangles with their images, or None when one is flat or folds over.

    ``apex`` picks a corner; None fans from the vertex centroid instead.
    """
    n = len(points)
    if apex is None:
        centre = tuple(sum((p[c] for p in points), QQ(0)) / n for c in range(2))
        target = tuple(sum((y[c] for y in images), QQ(0)) / n for c in range(len(images[0])))
        spokes = [(k, (k + 1) % n) for k in range(n)]
    else:
        centre, target = points[apex], images[apex]
        order = [(apex + k) % n for k in range(n)]
        spokes = list(zip(order[1:-1], order[2:]))
    triangles = []
    for j, k in spokes:
        corners = (centre, points[j], points[k])
        image = (target, images[j], images[k])
        if signed_area(corners) <= 0:
            return None
        if len(target) == 2 and signed_area(image) <= 0:
            return None
        if len(target) == 1 and len(set(image)) == 1:
            return None
        triangles.append((corners, image))
    return triangles


def _dedupe(ring: List[Tuple[Point, Point]]) -> List[Tuple[Point, Point]]:
    kept: List[Tuple[Point, Point]] = []
    for point, image in ring:
        if kept and kept[-1][0] == point:
            if kept[-1][1] != image:
                raise DegenerateCell(f"point {point} is sent to two places")
            continue
        kept.append((point, image))
    while len(kept) > 1 and kept[0][0] == kept[-1][0]:
        kept.pop()
    return kept


class CoverBuilder:
    """Builds the in-place cover arrangement of a permissible geometry."""

    def __init__(self, geometry: SimplicialGeometry, epsilon, overrides: Optional[Dict[MultiIndex, object]] = None):
        self.geometry = geometry
        self.n = geometry.ambient_dim
        self.epsilon = resolve_epsilon(geometry, epsilon, overrides)
        self.logger = logging.getLogger(f"{__name__}.CoverBuilder")

    def build(self) -> CoverArrangement:
        report = validate_permissibility(self.geometry)
        if not report.passed:
            raise IndexMismatch(f"geometry is not permissible: {report.first().detail}")
        for index, value in self.epsilon.items():
            if value <= 0:
                raise DegenerateCell(f"epsilon for {format_multi_index(index)} must be positive")
        self._check_collisions()
        outlines: Dict[MultiIndex, object] = {}
        fragments: Dict[FragmentKey, Fragment] = {}
        if self.n == 1:
            self._build_line(outlines, fragments)
        else:
            self._build_plane(outlines, fragments)
        self._check_tiling(fragments)
        arrangement = CoverArrangement(self.geometry, self.epsilon, outlines, fragments)
        arrangement.facets = self._build_facets(arrangement)
        self.logger.info("Built cover of %r: %s", self.geometry.name, arrangement.summary())
        return arrangement

    # -- ε admissibility in the original geometry

    def _sides(self) -> List[Tuple[Point, Point]]:
        sides = []
        for cell in self.geometry.top_cells:
            pts = [self.geometry.vertices[v] for v in cell]
            sides.extend(zip(pts, pts[1:] + pts[:1]))
        return sides

    def _junction_width(self, index: MultiIndex):
        widths = [self.epsilon[e] for e in self.geometry.index_set.faces(index) if e in self.epsilon]
        return max(widths + [self.epsilon[index]])

    def _check_collisions(self) -> None:
        g = self.geometry
        if self.n == 1:
            for index, eps in self.epsilon.items():
                (v,) = g.points(index)
                for other in g.vertices:
                    if other != v and abs(other[0] - v[0]) <= eps:
                        raise EpsilonTooLarge(
                            f"band of half-width {eps} around {format_multi_index(index)} reaches vertex {other[0]}"
                        )
            return
        sides = self._sides()
        for index, eps in self.epsilon.items():
            pts = g.points(index)
            if len(pts) == 2:
                p0, p1 = pts
                normal = g.inward_normal(index, index[0])
                offset = vec_scale(normal, eps)
                region = [vec_sub(p0, offset), vec_sub(p1, offset), vec_add(p1, offset), vec_add(p0, offset)]
            else:
                (v,) = pts
                h = self._junction_width(index)
                region = [vec_add(v, (sx * h, sy * h)) for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1))]
            if signed_area(region) < 0:
                region.reverse()
            for a, b in sides:
                if any(point_on_segment(p, a, b) for p in pts) or a in pts or b in pts:
                    continue
                if segment_meets_convex(a, b, region):
                    raise EpsilonTooLarge(
                        f"band around {format_multi_index(index)} meets a non-incident side {a}-{b}"
                    )

    # -- 1D

    def _build_line(self, outlines, fragments) -> None:
        g = self.geometry
        widths = {g.points(index)[0][0]: eps for index, eps in self.epsilon.items()}
        for a in range(len(g.top_cells)):
            cell = g.top_cell(a)
            trimmed = Interval(cell.lo + widths.get(cell.lo, 0), cell.hi - widths.get(cell.hi, 0))
            if trimmed.length <= 0:
                raise EpsilonTooLarge(f"bands swallow the whole of Ω_{a}")
            outlines[(a,)] = trimmed
            projection = AffineMap.through_points(
                [(trimmed.lo,), (trimmed.hi,)], [(cell.lo,), (cell.hi,)], trimmed, cell
            )
            self._add(fragments, (a,), 0, trimmed, projection)
        for index, eps in self.epsilon.items():
            (v,) = g.points(index)
            band = Interval(v[0] - eps, v[0] + eps)
            outlines[index] = band
            self._add(fragments, index, 0, band, AffineMap.constant(1, (), band, g.chart(index)))

    # -- 2D

    @cached_property
    def _used(self) -> List[Point]:
        g = self.geometry
        used = {g.vertices[v] for cell in g.top_cells for v in cell}
        used |= {g.vertices[v] for simplex in g.sub_simplices.values() for v in simplex}
        return sorted(used)

    def _nodes(self, a: int) -> List[Point]:
        """Vertices on ∂Ω_a in counter-clockwise order, T-junction points included."""
        pts = self.geometry.points((a,))
        nodes = []
        for p, q in zip(pts, pts[1:] + pts[:1]):
            d = vec_sub(q, p)
            between = [v for v in self._used if point_on_segment(v, p, q, strict=True)]
            nodes.append(p)
            nodes.extend(sorted(between, key=lambda v: dot(vec_sub(v, p), d)))
        return nodes

    def _edges_of(self, a: int) -> List[MultiIndex]:
        return [e for e in self.geometry.index_set.cofaces((a,)) if len(e) == 2]

    def _side_label(self, a: int, u: Point, w: Point) -> Optional[MultiIndex]:
        for e in self._edges_of(a):
            p0, p1 = self.geometry.points(e)
            if point_on_segment(u, p0, p1) and point_on_segment(w, p0, p1):
                return e
        return None

    def _offset_line(self, a: int, u: Point, w: Point):
        """(normal, height, width) of the trimmed line replacing the side u -> w of Ω_a."""
        e = self._side_label(a, u, w)
        if e is None:
            d = vec_sub(w, u)
            normal = (-d[1], d[0])
            return normal, dot(normal, u), QQ(0)
        normal = self.geometry.inward_normal(e, a)
        eps = self.epsilon[e]
        return normal, dot(normal, u) + eps, eps

    def _inner_points(self, a: int, nodes: List[Point]) -> Dict[Point, Point]:
        """c_a(w): the corner of Ũ_a that stands in for the node w."""
        inner = {}
        k = len(nodes)
        for j, w in enumerate(nodes):
            n_in, h_in, eps_in = self._offset_line(a, nodes[j - 1], w)
            n_out, h_out, eps_out = self._offset_line(a, w, nodes[(j + 1) % k])
            det = cross(n_in, n_out)
            if det == 0:
                # straight through w: taper to the thinner side
                width = min(eps_in, eps_out)
                inner[w] = vec_add(w, vec_scale(n_in, width)) if width else w
            else:
                inner[w] = (
                    (h_in * n_out[1] - h_out * n_in[1]) / det,
                    (n_in[0] * h_out - n_out[0] * h_in) / det,
                )
        return inner

    def _build_plane(self, outlines, fragments) -> None:
        g = self.geometry
        nodes = {a: self._nodes(a) for a in range(len(g.top_cells))}
        inner = {a: self._inner_points(a, nodes[a]) for a in nodes}
        for a in nodes:
            corners = [inner[a][w] for w in nodes[a]]
            if len(set(corners)) != len(corners) or signed_area(corners) <= 0:
                raise EpsilonTooLarge(f"trimming Ω_{a} by its band widths leaves a degenerate cell")
            outlines[(a,)] = Polygon(tuple(corners))
            self._triangulate((a,), corners, nodes[a], g.chart((a,)), fragments)
        for index in g.labels:
            if len(index) == 2:
                outlines[index] = self._band(index, nodes, inner, fragments)
            elif len(index) == 3:
                outlines[index] = self._corner(index, inner, fragments)

    def _junction_at(self, edge: MultiIndex, point: Point) -> bool:
        return any(self.geometry.points(j)[0] == point for j in self.geometry.index_set.cofaces(edge))

    def _band(self, edge: MultiIndex, nodes, inner, fragments) -> Polygon:
        g = self.geometry
        a, b = edge
        p0, p1 = g.points(edge)
        tangent = g.tangent(edge)

        def along(cell: int) -> List[Point]:
            on_edge = [w for w in nodes[cell] if point_on_segment(w, p0, p1)]
            return sorted(on_edge, key=lambda w: dot(vec_sub(w, p0), tangent))

        def chart(w: Point) -> Point:
            return (dot(vec_sub(w, p0), tangent),)

        ring = [(inner[a][w], chart(w)) for w in along(a)]
        if not self._junction_at(edge, p1):
            ring.append((p1, chart(p1)))
        ring += [(inner[b][w], chart(w)) for w in reversed(along(b))]
        if not self._junction_at(edge, p0):
            ring.append((p0, chart(p0)))
        ring = _dedupe(ring)
        points = [p for p, _ in ring]
        if signed_area(points) == 0:
            raise DegenerateCell(f"band {format_multi_index(edge)} has zero area")
        if signed_area(points) < 0:
            ring.reverse()
            points.reverse()
        self._triangulate(edge, points, [y for _, y in ring], g.chart(edge), fragments)
        return Polygon(tuple(points))

    def _corner(self, junction: MultiIndex, inner, fragments) -> Polygon:
        g = self.geometry
        (v,) = g.points(junction)
        corners = [inner[a][v] for a in junction]
        if signed_area(corners) == 0:
            raise DegenerateCell(f"corner at {format_multi_index(junction)} has zero area")
        if signed_area(corners) < 0:
            corners.reverse()
        cell = Polygon(tuple(corners))
        self._add(fragments, junction, 0, cell, AffineMap.constant(2, (), cell, g.chart(junction)))
        return cell

    def _triangulate(self, piece: MultiIndex, points, images, codomain, fragments) -> None:
        """Fan the piece from the first corner that gives positive triangles on both sides."""
        for apex in list(range(len(points))) + [None]:
            triangles = _fan(points, images, apex)
            if triangles is not None:
                break
        else:
            raise DegenerateCell(f"piece {format_multi_index(piece)} cannot be mapped affinely piece by piece")
        for part, (corners, image) in enumerate(triangles):
            cell = Polygon(corners)
            self._add(fragments, piece, part, cell, AffineMap.through_points(corners, image, cell, codomain))

    @staticmethod
    def _add(fragments, piece: MultiIndex, part: int, cell, projection: AffineMap) -> None:
        key = FragmentKey(tuple(piece), part)
        fragments[key] = Fragment(key, cell, projection)

    # -- tiling and facets

    def _check_tiling(self, fragments: Dict[FragmentKey, Fragment]) -> None:
        g = self.geometry
        keys = list(fragments)
        for k, first in enumerate(keys):
            for second in keys[k + 1:]:
                if shared_measure(fragments[first].cell, fragments[second].cell) > 0:
                    raise EpsilonTooLarge(
                        f"fragments {format_fragment(first)} and {format_fragment(second)} overlap"
                    )
        total = sum((f.measure for f in fragments.values()), QQ(0))
        expected = sum((measure_of(g.top_cell(a)) for a in range(len(g.top_cells))), QQ(0))
        if total != expected:
            raise LayoutError(f"pieces cover measure {total} of a geometry of measure {expected}")

    def _build_facets(self, arrangement: CoverArrangement) -> List[InterfacePair]:
        if self.n == 1:
            pairs = self._point_facets(arrangement)
        else:
            pairs = self._segment_facets(arrangement)
        return sorted(pairs, key=lambda p: (len(p.lower.piece), p.lower, len(p.upper.piece), p.upper))

    @staticmethod
    def _order(members):
        return sorted(members, key=lambda m: (len(m[0].piece), m[0]))

    def _segment_facets(self, arrangement: CoverArrangement) -> List[InterfacePair]:
        owners: Dict[frozenset, List[Tuple[FragmentKey, Point, Point]]] = {}
        for key, fragment in arrangement.fragments.items():
            for start, end in fragment.cell.edges():
                owners.setdefault(frozenset((start, end)), []).append((key, start, end))
        pairs, lonely = [], []
        for members in owners.values():
            if len(members) == 1:
                lonely.append(members[0])
                continue
            if len(members) > 2:
                raise UnmatchedFacet(f"{len(members)} fragments share the segment {members[0][1]}-{members[0][2]}")
            (low, start, end), (high, other_start, other_end) = self._order(members)
            if (other_start, other_end) != (end, start):
                raise UnmatchedFacet(
                    f"fragments {format_fragment(low)} and {format_fragment(high)} overlap along a side"
                )
            forward = OrientedFacet(low, high, start, end)
            pairs.append(InterfacePair(low, high, forward, forward.reversed()))
        for k, (key, start, end) in enumerate(lonely):
            for other, other_start, other_end in lonely[k + 1:]:
                if collinear_overlap((start, end), (other_start, other_end)) > 0:
                    raise UnmatchedFacet(
                        f"fragments {format_fragment(key)} and {format_fragment(other)} meet along part of a side"
                    )
        return pairs

    def _point_facets(self, arrangement: CoverArrangement) -> List[InterfacePair]:
        ends: Dict[object, List[Tuple[FragmentKey, Point, Point]]] = {}
        for key, fragment in arrangement.fragments.items():
            for x in (fragment.cell.lo, fragment.cell.hi):
                ends.setdefault(x, []).append((key, (x,), (x,)))
        pairs = []
        for x, members in ends.items():
            if len(members) == 1:
                continue
            if len(members) > 2:
                raise UnmatchedFacet(f"{len(members)} fragments end at {x}")
            (low, point, _), (high, _, _) = self._order(members)
            sign = 1 if arrangement.cell(low).hi == x else -1
            forward = OrientedFacet(low, high, point, point, sign)
            pairs.append(InterfacePair(low, high, forward, forward.reversed()))
        return pairs


def build_cover(geometry: SimplicialGeometry, eps, overrides: Optional[Dict[MultiIndex, object]] = None) -> CoverArrangement:
    """Cover of ``geometry`` with uniform half-width ``eps`` (or per-simplex overrides)."""
    return CoverBuilder(geometry, eps, overrides).build()


def interface_pairs(arrangement: CoverArrangement, index: MultiIndex) -> List[InterfacePair]:
    """Matched facet pairs (Γ_{l,m}, Γ_{m,l}) between fragments of U_i."""
    pairs = arrangement.facets_inside(tuple(index))
    for pair in pairs:
        forward, backward = pair.forward, pair.backward
        if forward.dim == 0:
            matched = forward.start == backward.start and forward.sign == -backward.sign
        else:
            matched = forward.start == backward.end and forward.end == backward.start
        if not matched:
            raise UnmatchedFacet(
                f"facet {format_fragment(pair.lower)}|{format_fragment(pair.upper)} has no opposite partner"
            )
    return pairs


BIJECTION = "index_bijection"
RETRACTION = "overlap_retracts"
DIRECTIONS = "directions_and_widths"
THIN_CONTACT = "thin_contact"
DISJOINT = "pieces_disjoint"
IN_PLACE = "trimmed_in_place"
AREA = "area_identity"


@dataclass
class AssumptionReport:
    checks: Dict[str, bool] = field(default_factory=dict)
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def fail(self, name: str, detail: str) -> None:
        self.checks[name] = False
        self.details.append(detail)


class AssumptionValidator:
    """Checks an arrangement against the standing assumptions on the cover."""

    NAMES = (BIJECTION, RETRACTION, DIRECTIONS, THIN_CONTACT, DISJOINT, IN_PLACE, AREA)

    def __init__(self, arrangement: CoverArrangement):
        self.arrangement = arrangement
        self.geometry = arrangement.geometry
        self.report = AssumptionReport({name: True for name in self.NAMES})

    def run(self) -> AssumptionReport:
        self._check_bijection()
        self._check_retractions()
        self._check_directions()
        self._check_thin_contact()
        self._check_disjoint()
        self._check_in_place()
        self._check_area()
        if not self.report.passed:
            logger.warning("Cover assumptions fail: %s", "; ".join(self.report.details))
        return self.report

    def _image(self, key: FragmentKey):
        fragment = self.arrangement.fragments[key]
        corners = [fragment.projection(v) for v in fragment.cell.vertices]
        if len(corners) == 2:
            return corners[1][0] - corners[0][0]
        return signed_area(corners)

    def _check_bijection(self) -> None:
        """Ũ_a is carried onto Ω_a without folds."""
        arr = self.arrangement
        cells = range(len(self.geometry.top_cells))
        if set(arr.open_sets) != set(cells):
            self.report.fail(BIJECTION, "open sets are not indexed by the top cells")
            return
        for a in cells:
            images = [self._image(key) for key in arr.parts((a,))]
            if any(image <= 0 for image in images):
                self.report.fail(BIJECTION, f"the map Ũ_{a} -> Ω_{a} folds")
            elif sum(images, QQ(0)) != measure_of(self.geometry.top_cell(a)):
                self.report.fail(BIJECTION, f"Ũ_{a} does not map onto Ω_{a}")

    def _check_retractions(self) -> None:
        """ρ_{i,m} lands in Ω_i and factors through every Ω_j between i and m."""
        arr = self.arrangement
        g = self.geometry
        for i in g.labels:
            chart = g.chart(i)
            for key in arr.pieces(i):
                rho = arr.piece_map(i, key)
                if not all(chart.contains(rho(v)) for v in arr.cell(key).vertices):
                    self.report.fail(RETRACTION, f"ρ_{format_multi_index(i)} leaves Ω_{format_multi_index(i)}")
                for j in g.index_set.containing(i):
                    if set(j) <= set(key.piece):
                        via = g.inclusion(i, j).compose(arr.piece_map(j, key))
                        if not via.same_action(rho):
                            self.report.fail(
                                RETRACTION,
                                f"ρ on {format_fragment(key)} does not factor through Ω_{format_multi_index(j)}",
                            )

    def _check_directions(self) -> None:
        arr = self.arrangement
        for index, value in arr.epsilon.items():
            if value <= 0:
                self.report.fail(DIRECTIONS, f"non-positive width at {format_multi_index(index)}")
        if self.geometry.ambient_dim == 1:
            return
        for band in arr.bands:
            length = self.geometry.edge_length(band)
            reached = set()
            for key in arr.parts(band):
                fragment = arr.fragments[key]
                if not any(fragment.projection.linear[0]):
                    self.report.fail(DIRECTIONS, f"fragment {format_fragment(key)} has no transversal fibres")
                reached |= {fragment.projection(v)[0] for v in fragment.cell.vertices}
            if min(reached) != 0 or max(reached) != length:
                self.report.fail(DIRECTIONS, f"band {format_multi_index(band)} does not project onto its edge")

    def _check_thin_contact(self) -> None:
        if self.geometry.ambient_dim == 1:
            return
        arr = self.arrangement
        for low in arr.tilde_cells:
            for high in arr.tilde_cells:
                if len(high) - len(low) < 2:
                    continue
                shared = QQ(0)
                for side in arr.tilde_cells[low].edges():
                    for other in arr.tilde_cells[high].edges():
                        shared += collinear_overlap(side, other)
                if shared:
                    self.report.fail(
                        THIN_CONTACT,
                        f"∂Ũ_{format_multi_index(low)} and ∂Ũ_{format_multi_index(high)} share a segment",
                    )

    def _check_disjoint(self) -> None:
        fragments = self.arrangement.fragments
        keys = list(fragments)
        for k, first in enumerate(keys):
            for second in keys[k + 1:]:
                if shared_measure(fragments[first].cell, fragments[second].cell) > 0:
                    self.report.fail(
                        DISJOINT, f"{format_fragment(first)} and {format_fragment(second)} overlap"
                    )

    def _check_in_place(self) -> None:
        """Every piece Ũ_m lies inside the union of the cells Ω_a, a ∈ m."""
        g = self.geometry
        for key, fragment in self.arrangement.fragments.items():
            inside = sum((shared_measure(fragment.cell, g.top_cell(a)) for a in key.piece), QQ(0))
            if inside != fragment.measure:
                self.report.fail(IN_PLACE, f"{format_fragment(key)} leaves the cells it is built from")

    def _check_area(self) -> None:
        """The fragments lie in Ω and their measures add up to the measure of Ω."""
        arr = self.arrangement
        g = self.geometry
        cells = [g.top_cell(a) for a in range(len(g.top_cells))]
        expected = sum((measure_of(cell) for cell in cells), QQ(0))
        total = QQ(0)
        for key, fragment in arr.fragments.items():
            total += fragment.measure
            inside = sum((shared_measure(fragment.cell, cell) for cell in cells), QQ(0))
            if inside != fragment.measure:
                self.report.fail(AREA, f"{format_fragment(key)} sticks out of Ω")
        if total != expected:
            self.report.fail(AREA, f"pieces have total measure {total}, Ω has {expected}")


def validate_cover_assumptions(arrangement: CoverArrangement) -> AssumptionReport:
    return AssumptionValidator(arrangement).run()
