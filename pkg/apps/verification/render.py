"""
SVG renders of a geometry and its cover arrangement.

Coordinates stay rational until they are written out with a fixed number of
decimals; nothing here feeds back into a check.
"""

import logging
from typing import Dict, List, Optional, Sequence

from django.template.loader import render_to_string
from sympy import QQ

from apps.core.exceptions import UnsupportedDimension
from apps.geometry.cover import CoverArrangement
from apps.geometry.polygons import Point, vec_add, vec_scale, vec_sub
from apps.geometry.simplices import SimplicialGeometry, format_multi_index

logger = logging.getLogger(__name__)

CANVAS = 480
MARGIN = 20
DECIMALS = 10 ** 3

# fill colour by multi-index length: cells, bands, corners
PALETTE = {1: "#9ecae1", 2: "#fdae6b", 3: "#d62728"}


def decimal(value) -> str:
    value = QQ.convert(value)
    scaled = (int(value.numerator) * DECIMALS) // int(value.denominator)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), DECIMALS)
    return f"{sign}{whole}.{frac:03d}"


class Viewport:
    """Maps rational ambient coordinates onto the canvas, y pointing up."""

    def __init__(self, points: Sequence[Point]):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points] if points and len(points[0]) > 1 else [QQ(0)]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), QQ(1))
        self.scale = QQ(CANVAS - 2 * MARGIN) / span

    def x(self, value) -> str:
        return decimal(MARGIN + (value - self.x0) * self.scale)

    def y(self, value) -> str:
        return decimal(MARGIN + (self.y1 - value) * self.scale)

    def points(self, pts: Sequence[Point]) -> str:
        return " ".join(f"{self.x(p[0])},{self.y(p[1])}" for p in pts)


class ArrangementRenderer:
    def __init__(self, geometry: SimplicialGeometry, arrangement: Optional[CoverArrangement] = None,
                 show_cover: bool = True, show_interfaces: bool = True):
        self.geometry = geometry
        self.arrangement = arrangement
        self.show_cover = show_cover and arrangement is not None
        self.show_interfaces = show_interfaces and arrangement is not None
        self.logger = logging.getLogger(f"{__name__}.ArrangementRenderer")

    def render(self) -> str:
        if self.geometry.ambient_dim != 2:
            raise UnsupportedDimension(f"SVG render needs a 2D geometry, got dimension {self.geometry.ambient_dim}")
        points = list(self.geometry.vertices)
        if self.show_cover:
            points += [p for cell in self.arrangement.tilde_cells.values() for p in cell.vertices]
        view = Viewport(points)
        context = {
            "size": CANVAS,
            "title": self.geometry.name or "geometry",
            "simplices": self._simplices(view),
            "pieces": self._pieces(view) if self.show_cover else [],
            "open_sets": self._open_sets(view) if self.show_cover else [],
            "interfaces": self._interfaces(view) if self.show_interfaces else [],
        }
        svg = render_to_string("verification/arrangement.svg", context)
        self.logger.info(
            "Rendered %r: %d simplices, %d pieces", self.geometry.name, len(context["simplices"]), len(context["pieces"])
        )
        return svg

    def _simplices(self, view: Viewport) -> List[Dict[str, str]]:
        items = []
        for a in range(len(self.geometry.top_cells)):
            items.append({"label": str(a), "points": view.points(self.geometry.top_cell(a).vertices)})
        return items

    def _pieces(self, view: Viewport) -> List[Dict[str, str]]:
        items = []
        for index, cell in sorted(self.arrangement.tilde_cells.items(), key=lambda kv: (len(kv[0]), kv[0])):
            items.append({
                "label": format_multi_index(index),
                "level": len(index),
                "fill": PALETTE.get(len(index), "#7f7f7f"),
                "points": view.points(cell.vertices),
            })
        return items

    def _open_sets(self, view: Viewport) -> List[Dict[str, str]]:
        items = []
        for a, cells in self.arrangement.open_sets.items():
            outline = " ".join(f"M {view.points(cell.vertices)} Z" for cell in cells)
            items.append({"label": str(a), "path": outline})
        return items

    def _interfaces(self, view: Viewport) -> List[Dict[str, str]]:
        items = []
        for pair in self.arrangement.facets:
            if not pair.crosses_pieces:
                continue
            facet = pair.forward
            mid = vec_scale(vec_add(facet.start, facet.end), QQ(1, 2))
            d = vec_sub(facet.end, facet.start)
            # owner lies to the left of start -> end
            tick = vec_add(mid, vec_scale((-d[1], d[0]), QQ(1, 8)))
            items.append({
                "label": f"{format_multi_index(pair.lower.piece)}|{format_multi_index(pair.upper.piece)}",
                "x1": view.x(facet.start[0]), "y1": view.y(facet.start[1]),
                "x2": view.x(facet.end[0]), "y2": view.y(facet.end[1]),
                "mx": view.x(mid[0]), "my": view.y(mid[1]),
                "tx": view.x(tick[0]), "ty": view.y(tick[1]),
            })
        return items


def render_svg(arrangement: CoverArrangement, show_cover: bool = True, show_interfaces: bool = True) -> str:
    return ArrangementRenderer(arrangement.geometry, arrangement, show_cover, show_interfaces).render()


def render_geometry_svg(geometry: SimplicialGeometry) -> str:
    """Geometry only, no cover."""
    return ArrangementRenderer(geometry).render()


def render_number_line(geometry: SimplicialGeometry, arrangement: Optional[CoverArrangement] = None) -> str:
    points = [(v[0], QQ(0)) for v in geometry.vertices]
    if arrangement is not None:
        points += [(p[0], QQ(0)) for cell in arrangement.tilde_cells.values() for p in cell.vertices]
    view = Viewport(points)
    row = {1: 0, 2: 1}
    segments = []
    for a in range(len(geometry.top_cells)):
        cell = geometry.top_cell(a)
        segments.append({"label": str(a), "row": 0, "x1": view.x(cell.lo), "x2": view.x(cell.hi), "fill": PALETTE[1]})
    if arrangement is not None:
        for index, cell in sorted(arrangement.tilde_cells.items()):
            segments.append({
                "label": format_multi_index(index),
                "row": 1 + row.get(len(index), 1),
                "x1": view.x(cell.lo),
                "x2": view.x(cell.hi),
                "fill": PALETTE.get(len(index), "#7f7f7f"),
            })
    for segment in segments:
        segment["y"] = 30 + 40 * segment["row"]
    return render_to_string(
        "verification/number_line.svg",
        {"size": CANVAS, "title": geometry.name or "geometry", "segments": segments},
    )


def render_document(geometry: SimplicialGeometry, arrangement: Optional[CoverArrangement] = None) -> str:
    """2D render, falling back to the number line in 1D."""
    try:
        if arrangement is None:
            return render_geometry_svg(geometry)
        return render_svg(arrangement)
    except UnsupportedDimension:
        logger.info("Rendering %r as a number line", geometry.name)
        return render_number_line(geometry, arrangement)
