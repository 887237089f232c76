"""
Affine maps between chart coordinate spaces.

``linear`` is a target_dim x source_dim matrix stored as a tuple of rows.
A map may carry the cell it is defined on (``domain``) and the cell it lands
in (``codomain``); pullbacks along it produce forms living on ``domain``.
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

from sympy import QQ

from .polygons import Cell, Point


@dataclass(frozen=True)
class AffineMap:
    linear: Tuple[Tuple[object, ...], ...]
    translation: Tuple[object, ...]
    source_dim: int
    target_dim: int
    domain: Optional[Cell] = None
    codomain: Optional[Cell] = None

    @classmethod
    def build(cls, linear: Sequence[Sequence[object]], translation: Sequence[object],
              source_dim: int, domain: Optional[Cell] = None,
              codomain: Optional[Cell] = None) -> "AffineMap":
        rows = tuple(tuple(QQ.convert(v) for v in row) for row in linear)
        shift = tuple(QQ.convert(v) for v in translation)
        if len(rows) != len(shift) or any(len(row) != source_dim for row in rows):
            raise ValueError("inconsistent affine map shape")
        return cls(rows, shift, source_dim, len(shift), domain, codomain)

    @classmethod
    def identity(cls, dim: int, domain: Optional[Cell] = None) -> "AffineMap":
        rows = [[QQ(1) if i == j else QQ(0) for j in range(dim)] for i in range(dim)]
        return cls.build(rows, [QQ(0)] * dim, dim, domain, domain)

    @classmethod
    def translation_by(cls, shift: Point, domain: Optional[Cell] = None,
                       codomain: Optional[Cell] = None) -> "AffineMap":
        dim = len(shift)
        rows = [[QQ(1) if i == j else QQ(0) for j in range(dim)] for i in range(dim)]
        return cls.build(rows, shift, dim, domain, codomain)

    @classmethod
    def constant(cls, source_dim: int, value: Point, domain: Optional[Cell] = None,
                 codomain: Optional[Cell] = None) -> "AffineMap":
        rows = [[QQ(0)] * source_dim for _ in value]
        return cls.build(rows, value, source_dim, domain, codomain)

    @classmethod
    def through_points(cls, sources: Sequence[Point], images: Sequence[Point],
                       domain: Optional[Cell] = None, codomain: Optional[Cell] = None) -> "AffineMap":
        """The affine map sending ``sources[k]`` to ``images[k]``.

        Needs source_dim + 1 affinely independent sources: the two ends of an
        interval or the three corners of a triangle.
        """
        source_dim = len(sources[0])
        if len(sources) != source_dim + 1 or len(images) != len(sources):
            raise ValueError("an affine map needs one image per corner of a simplex")
        s0, y0 = sources[0], images[0]
        rows = []
        if source_dim == 1:
            span = sources[1][0] - s0[0]
            if span == 0:
                raise ValueError("affinely dependent source points")
            rows = [[(y1 - y) / span] for y, y1 in zip(y0, images[1])]
        elif source_dim == 2:
            e1 = (sources[1][0] - s0[0], sources[1][1] - s0[1])
            e2 = (sources[2][0] - s0[0], sources[2][1] - s0[1])
            det = e1[0] * e2[1] - e1[1] * e2[0]
            if det == 0:
                raise ValueError("affinely dependent source points")
            for y, y1, y2 in zip(y0, images[1], images[2]):
                d1, d2 = y1 - y, y2 - y
                rows.append([(d1 * e2[1] - d2 * e1[1]) / det, (d2 * e1[0] - d1 * e2[0]) / det])
        else:
            raise ValueError(f"no affine interpolation from dimension {source_dim}")
        shift = [y - sum((a * x for a, x in zip(row, s0)), QQ(0)) for y, row in zip(y0, rows)]
        return cls.build(rows, shift, source_dim, domain, codomain)

    def __call__(self, point: Point) -> Point:
        if len(point) != self.source_dim:
            raise ValueError(f"point of dimension {len(point)} for a map from dimension {self.source_dim}")
        return tuple(
            sum((a * x for a, x in zip(row, point)), QQ(0)) + b
            for row, b in zip(self.linear, self.translation)
        )

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """``self ∘ inner``."""
        if inner.target_dim != self.source_dim:
            raise ValueError("cannot compose affine maps of mismatched dimensions")
        rows = [
            [sum((self.linear[i][k] * inner.linear[k][j] for k in range(self.source_dim)), QQ(0))
             for j in range(inner.source_dim)]
            for i in range(self.target_dim)
        ]
        shift = self(inner.translation)
        return AffineMap.build(rows, shift, inner.source_dim, inner.domain, self.codomain)

    def with_domain(self, domain: Optional[Cell]) -> "AffineMap":
        return replace(self, domain=domain)

    def is_identity(self) -> bool:
        if self.source_dim != self.target_dim:
            return False
        return all(
            self.linear[i][j] == (1 if i == j else 0)
            for i in range(self.target_dim) for j in range(self.source_dim)
        ) and not any(self.translation)

    def same_action(self, other: "AffineMap") -> bool:
        return self.linear == other.linear and self.translation == other.translation
