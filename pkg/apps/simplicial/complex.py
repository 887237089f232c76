"""
The simplicial de Rham double complex S^{p,q}.

S^{p,q} is the product over i ∈ I^p of capped polynomial q-forms on Ω_i,
written in the chart of Ω_i. The vertical differential is the exterior
derivative componentwise; the horizontal one is the jump operator

    (δ a)_i = Σ_l (-1)^{k+l} tr_i a_{i∖l},   k = p + q.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from apps.core import linalg
from apps.core.complexes import AssembledComplex, BigradeIndex, OperatorMatrix
from apps.core.exceptions import MissingComponent
from apps.forms.polyform import (
    UNIFORM,
    PolyForm,
    coordinates,
    exterior_derivative,
    form_basis,
    from_coordinates,
    gram_matrix,
    pullback_affine,
    zero_form,
)
from apps.geometry.simplices import MultiIndex, SimplicialGeometry, format_multi_index, omit

logger = logging.getLogger(__name__)


@dataclass
class SimplicialElement:
    bigrade: BigradeIndex
    components: Dict[MultiIndex, PolyForm] = field(default_factory=dict)

    def component(self, index: MultiIndex) -> PolyForm:
        if tuple(index) not in self.components:
            raise MissingComponent(f"no component on Ω_{format_multi_index(index)}")
        return self.components[tuple(index)]

    def is_zero(self) -> bool:
        return all(form.is_zero() for form in self.components.values())

    def __add__(self, other: "SimplicialElement") -> "SimplicialElement":
        keys = set(self.components) | set(other.components)
        return SimplicialElement(
            self.bigrade,
            {k: self.component(k) + other.component(k) for k in sorted(keys)},
        )

    def scale(self, factor) -> "SimplicialElement":
        return SimplicialElement(self.bigrade, {k: v.scale(factor) for k, v in self.components.items()})


@dataclass
class BasisBlock:
    """Basis of S^{p,q}: consecutive runs of chart forms, one run per i ∈ I^p."""
    bigrade: BigradeIndex
    entries: List[Tuple[MultiIndex, PolyForm]]
    offsets: Dict[MultiIndex, int]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> List[str]:
        return [f"{format_multi_index(i)}:{form}" for i, form in self.entries]


class SimplicialDeRham:
    """Bases, operators and Gram matrices of S for one geometry and degree cap."""

    def __init__(self, geometry: SimplicialGeometry, cap: int, family: str = UNIFORM,
                 weights: Optional[Dict[MultiIndex, object]] = None):
        self.geometry = geometry
        self.cap = cap
        self.family = family
        self.weights = weights or {}
        self.n = geometry.ambient_dim
        self.logger = logging.getLogger(f"{__name__}.SimplicialDeRham")

    def bigrades(self) -> List[BigradeIndex]:
        top = self.geometry.index_set.top_level
        return [
            BigradeIndex(p, q)
            for p in range(top + 1)
            for q in range(self.n - p + 1)
        ]

    def chart_basis(self, index: MultiIndex, q: int) -> List[PolyForm]:
        dim = self.geometry.simplex_dim(index)
        return form_basis(dim, q, self.cap, self.family, self.geometry.chart(index))

    @cached_property
    def basis(self) -> Dict[BigradeIndex, BasisBlock]:
        blocks = {}
        for b in self.bigrades():
            entries: List[Tuple[MultiIndex, PolyForm]] = []
            offsets: Dict[MultiIndex, int] = {}
            for i in self.geometry.index_set.level(b.p):
                offsets[i] = len(entries)
                entries.extend((i, form) for form in self.chart_basis(i, b.q))
            blocks[b] = BasisBlock(b, entries, offsets)
        return blocks

    def element(self, bigrade: BigradeIndex, vector: Sequence[object]) -> SimplicialElement:
        block = self.basis[bigrade]
        if len(vector) != len(block):
            raise MissingComponent(f"vector of length {len(vector)} for S^{bigrade.label()} of dimension {len(block)}")
        components = {}
        for i in self.geometry.index_set.level(bigrade.p):
            dim = self.geometry.simplex_dim(i)
            size = len(self.chart_basis(i, bigrade.q))
            start = block.offsets[i]
            components[i] = from_coordinates(
                vector[start:start + size], dim, bigrade.q, self.cap, self.family, self.geometry.chart(i)
            )
        return SimplicialElement(bigrade, components)

    def vector(self, element: SimplicialElement) -> List[object]:
        values: List[object] = []
        for i in self.geometry.index_set.level(element.bigrade.p):
            values.extend(coordinates(element.component(i), self.cap, self.family))
        return values

    def zero(self, bigrade: BigradeIndex) -> SimplicialElement:
        return SimplicialElement(
            bigrade,
            {
                i: zero_form(self.geometry.simplex_dim(i), bigrade.q, self.geometry.chart(i))
                for i in self.geometry.index_set.level(bigrade.p)
            },
        )

    # operators on elements

    def jump(self, a: SimplicialElement) -> SimplicialElement:
        p, q = a.bigrade.p, a.bigrade.q
        target = BigradeIndex(p + 1, q)
        k = p + q
        components = {}
        for i in self.geometry.index_set.level(p + 1):
            dim = self.geometry.simplex_dim(i)
            total = zero_form(dim, q, self.geometry.chart(i))
            for l in range(len(i)):
                face = omit(i, l)
                if face not in self.geometry.index_set:
                    continue
                restricted = pullback_affine(self.geometry.inclusion(face, i), a.component(face))
                sign = -1 if (k + l) % 2 else 1
                total = total + restricted.on(total.cell).scale(sign)
            components[i] = total
        return SimplicialElement(target, components)

    def derivative(self, a: SimplicialElement) -> SimplicialElement:
        return vertical_derivative(a)

    # matrices

    def _operator(self, source: BigradeIndex, target: BigradeIndex, apply) -> Optional[OperatorMatrix]:
        if target not in self.basis:
            return None
        rows = len(self.basis[target])
        block = self.basis[source]
        columns: Dict[int, Dict[int, object]] = {}
        for col in range(len(block)):
            unit = [QQ(0)] * len(block)
            unit[col] = QQ(1)
            image = self.vector(apply(self.element(source, unit)))
            for row, value in enumerate(image):
                if value:
                    columns.setdefault(row, {})[col] = value
        return OperatorMatrix(source, target, linalg.from_dod(columns, (rows, len(block))))

    def gram(self, bigrade: BigradeIndex) -> SDM:
        blocks = []
        for i in self.geometry.index_set.level(bigrade.p):
            g = gram_matrix(self.chart_basis(i, bigrade.q), self.geometry.chart(i))
            weight = self.weights.get(i)
            blocks.append(linalg.scale(g, weight) if weight is not None else g)
        return linalg.block_diagonal(blocks)

    @cached_property
    def assembled(self) -> AssembledComplex:
        horizontal, vertical, gram = {}, {}, {}
        for b in self.bigrades():
            op = self._operator(b, b.horizontal(), self.jump)
            if op is not None:
                horizontal[b] = op
            op = self._operator(b, b.vertical(), self.derivative)
            if op is not None:
                vertical[b] = op
            gram[b] = self.gram(b)
        blocks = {b: block.labels() for b, block in self.basis.items()}
        complex_ = AssembledComplex(f"S({self.geometry.name}, r={self.cap})", blocks, horizontal, vertical, gram)
        self.logger.info(
            "Assembled %s: dims %s", complex_.name, {b.label(): len(block) for b, block in self.basis.items()}
        )
        return complex_


def build_basis(geometry: SimplicialGeometry, cap: int, family: str = UNIFORM) -> Dict[BigradeIndex, BasisBlock]:
    return SimplicialDeRham(geometry, cap, family).basis


def jump_operator(a: SimplicialElement, geometry: SimplicialGeometry) -> SimplicialElement:
    return SimplicialDeRham(geometry, 0).jump(a)


def vertical_derivative(a: SimplicialElement) -> SimplicialElement:
    return SimplicialElement(
        a.bigrade.vertical(),
        {i: exterior_derivative(form) for i, form in a.components.items()},
    )


def assemble(geometry: SimplicialGeometry, cap: int, family: str = UNIFORM) -> AssembledComplex:
    return SimplicialDeRham(geometry, cap, family).assembled
