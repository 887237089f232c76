"""
Exact convex cells and polygon primitives.

Points are tuples of QQ. Polygons are convex with counter-clockwise vertex
order; collinear boundary vertices are allowed so that T-junctions stay
explicit. Monomial moments are integrated exactly by fan triangulation from
the first vertex, using ∫_T u^a v^b = a! b! / (a+b+2)! on the reference
triangle.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import List, Optional, Sequence, Tuple

from sympy import QQ

Point = Tuple[object, ...]


def vec_sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(a: Point, s) -> Point:
    return tuple(x * s for x in a)


def dot(a: Point, b: Point):
    return sum((x * y for x, y in zip(a, b)), QQ(0))


def cross(a: Point, b: Point):
    return a[0] * b[1] - a[1] * b[0]


def as_point(coords: Sequence[object]) -> Point:
    return tuple(QQ.convert(c) for c in coords)


def signed_area(points: Sequence[Point]):
    total = QQ(0)
    n = len(points)
    for k in range(n):
        total += cross(points[k], points[(k + 1) % n])
    return total / 2


def is_convex(points: Sequence[Point]) -> bool:
    """Counter-clockwise and convex (collinear triples allowed)."""
    n = len(points)
    if n < 3 or signed_area(points) <= 0:
        return False
    for k in range(n):
        a, b, c = points[k], points[(k + 1) % n], points[(k + 2) % n]
        if cross(vec_sub(b, a), vec_sub(c, b)) < 0:
            return False
    return True


def convex_hull(points: Sequence[Point]) -> List[Point]:
    """Monotone chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: List[Point] = []
        for p in seq:
            while len(chain) >= 2 and cross(vec_sub(chain[-1], chain[-2]), vec_sub(p, chain[-2])) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def clip_half_plane(points: Sequence[Point], normal: Point, offset) -> List[Point]:
    """Keep the part of a convex polygon with normal·x <= offset."""
    result: List[Point] = []
    n = len(points)
    for k in range(n):
        cur, nxt = points[k], points[(k + 1) % n]
        fc = dot(normal, cur) - offset
        fn = dot(normal, nxt) - offset
        if fc <= 0:
            result.append(cur)
        if (fc < 0 < fn) or (fn < 0 < fc):
            t = fc / (fc - fn)
            result.append(vec_add(cur, vec_scale(vec_sub(nxt, cur), t)))
    deduped: List[Point] = []
    for p in result:
        if not deduped or deduped[-1] != p:
            deduped.append(p)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def edge_half_planes(points: Sequence[Point]) -> List[Tuple[Point, object]]:
    """Half-planes (normal, offset) whose intersection is the polygon."""
    planes = []
    n = len(points)
    for k in range(n):
        a, b = points[k], points[(k + 1) % n]
        d = vec_sub(b, a)
        if d == (0, 0):
            continue
        normal = (d[1], -d[0])
        planes.append((normal, dot(normal, a)))
    return planes


def intersect_convex(p: Sequence[Point], q: Sequence[Point]) -> List[Point]:
    result = list(p)
    for normal, offset in edge_half_planes(q):
        result = clip_half_plane(result, normal, offset)
        if not result:
            break
    return result


def overlap_area(p: Sequence[Point], q: Sequence[Point]):
    clipped = intersect_convex(p, q)
    if len(clipped) < 3:
        return QQ(0)
    return signed_area(clipped)


def point_in_convex(point: Point, points: Sequence[Point], closed: bool = True) -> bool:
    for normal, offset in edge_half_planes(points):
        value = dot(normal, point) - offset
        if value > 0 or (not closed and value == 0):
            return False
    return True


def segment_meets_convex(a: Point, b: Point, points: Sequence[Point]) -> bool:
    """Closed segment against closed convex polygon."""
    lo, hi = QQ(0), QQ(1)
    d = vec_sub(b, a)
    for normal, offset in edge_half_planes(points):
        fa = dot(normal, a) - offset
        fd = dot(normal, d)
        if fd == 0:
            if fa > 0:
                return False
            continue
        t = -fa / fd
        if fd > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        if lo > hi:
            return False
    return True


def collinear_overlap(a: Tuple[Point, Point], b: Tuple[Point, Point]):
    """Length parameter (in units of segment ``a``) shared by two segments."""
    p0, p1 = a
    q0, q1 = b
    d = vec_sub(p1, p0)
    if cross(d, vec_sub(q0, p0)) != 0 or cross(d, vec_sub(q1, p0)) != 0:
        return QQ(0)
    dd = dot(d, d)
    if dd == 0:
        return QQ(0)
    s0 = dot(vec_sub(q0, p0), d) / dd
    s1 = dot(vec_sub(q1, p0), d) / dd
    lo, hi = max(QQ(0), min(s0, s1)), min(QQ(1), max(s0, s1))
    return max(QQ(0), hi - lo)


def point_on_segment(point: Point, a: Point, b: Point, strict: bool = False) -> bool:
    d = vec_sub(b, a)
    if cross(d, vec_sub(point, a)) != 0:
        return False
    s = dot(vec_sub(point, a), d)
    length2 = dot(d, d)
    if strict:
        return 0 < s < length2
    return 0 <= s <= length2


def _reference_triangle_integral(poly) -> object:
    total = QQ(0)
    for (a, b), coeff in poly.terms():
        total += coeff * QQ(factorial(a) * factorial(b), factorial(a + b + 2))
    return total


@dataclass(frozen=True)
class Polygon:
    vertices: Tuple[Point, ...]

    dim = 2

    @classmethod
    def from_points(cls, points: Sequence[Sequence[object]]) -> "Polygon":
        return cls(tuple(as_point(p) for p in points))

    @property
    def area(self):
        return signed_area(self.vertices)

    def edges(self) -> List[Tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def translate(self, shift: Point) -> "Polygon":
        return Polygon(tuple(vec_add(v, shift) for v in self.vertices))

    def contains(self, point: Point, closed: bool = True) -> bool:
        return point_in_convex(point, self.vertices, closed)

    def triangles(self) -> List[Tuple[Point, Point, Point]]:
        v = self.vertices
        return [(v[0], v[k], v[k + 1]) for k in range(1, len(v) - 1)]

    def moment(self, exponent: Tuple[int, int]):
        return _polygon_moment(self, tuple(exponent))


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object

    dim = 1

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def vertices(self) -> Tuple[Point, ...]:
        return ((self.lo,), (self.hi,))

    def translate(self, shift: Point) -> "Interval":
        return Interval(self.lo + shift[0], self.hi + shift[0])

    def contains(self, point: Point, closed: bool = True) -> bool:
        x = point[0]
        if closed:
            return self.lo <= x <= self.hi
        return self.lo < x < self.hi

    def moment(self, exponent: Tuple[int, ...]):
        a = exponent[0]
        if any(exponent[1:]):
            raise ValueError("interval moments only involve the first coordinate")
        return (self.hi ** (a + 1) - self.lo ** (a + 1)) / (a + 1)


@dataclass(frozen=True)
class PointCell:
    """A 0-dimensional chart; integration is evaluation with unit mass."""
    label: Tuple[int, ...] = ()

    dim = 0

    @property
    def vertices(self) -> Tuple[Point, ...]:
        return ((),)

    def contains(self, point: Point, closed: bool = True) -> bool:
        return len(point) == 0

    def moment(self, exponent: Tuple[int, ...]):
        return QQ(1) if not any(exponent) else QQ(0)


Cell = object


@lru_cache(maxsize=65536)
def _polygon_moment(polygon: Polygon, exponent: Tuple[int, int]):
    from apps.forms.polyform import X, Y, substitute

    a, b = exponent
    monomial = X ** a * Y ** b
    total = QQ(0)
    for p0, p1, p2 in polygon.triangles():
        e1, e2 = vec_sub(p1, p0), vec_sub(p2, p0)
        jacobian = cross(e1, e2)
        if jacobian == 0:
            continue
        image = substitute(
            monomial,
            [X * e1[0] + Y * e2[0] + p0[0], X * e1[1] + Y * e2[1] + p0[1]],
        )
        total += jacobian * _reference_triangle_integral(image)
    return total


def cell_dimension(cell: Optional[Cell]) -> Optional[int]:
    return getattr(cell, "dim", None)
