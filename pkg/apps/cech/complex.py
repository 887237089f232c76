"""
The Čech-de Rham double complex A^{p,q} of a cover arrangement.

A component on U_i is a piecewise polynomial q-form, one ambient-coordinate
form per fragment of the pieces Ũ_m (m ⊇ i). Only tangentially continuous
components are kept: traces from both sides of every interior facet of U_i
must agree, which is exactly weak differentiability for piecewise smooth
forms.

The conforming space is the kernel of the trace-jump constraints. Its basis
comes from the reduced echelon form, so the coordinates of a conforming raw
vector are its entries at the free columns.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from apps.core import linalg
from apps.core.complexes import AssembledComplex, BigradeIndex, OperatorMatrix, TotalComplex, total_complex
from apps.core.exceptions import MissingComponent, NotWeaklyDifferentiable, ShapeMismatch
from apps.forms.polyform import (
    UNIFORM,
    PiecewiseForm,
    PolyForm,
    coordinates,
    exterior_derivative,
    form_basis,
    from_coordinates,
    gram_matrix,
    pullback_affine,
    zero_form,
)
from apps.geometry.cover import CoverArrangement, FragmentKey, InterfacePair, format_fragment, interface_pairs
from apps.geometry.simplices import MultiIndex, format_multi_index, omit

logger = logging.getLogger(__name__)

VERIFIED = "verified"
UNVERIFIED = "unverified"
BROKEN = "broken"


@dataclass
class ContinuityResult:
    verified: bool
    witness: Optional[InterfacePair] = None

    @property
    def status(self) -> str:
        return VERIFIED if self.verified else BROKEN


@dataclass
class CechElement:
    bigrade: BigradeIndex
    components: Dict[MultiIndex, PiecewiseForm] = field(default_factory=dict)
    status: Dict[MultiIndex, str] = field(default_factory=dict)

    def component(self, index: MultiIndex) -> PiecewiseForm:
        if tuple(index) not in self.components:
            raise MissingComponent(f"no component on U_{format_multi_index(index)}")
        return self.components[tuple(index)]

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.components.values())


def _piece_form(b: PiecewiseForm, piece: FragmentKey, dim: int) -> PolyForm:
    form = b.pieces.get(piece)
    return form if form is not None else zero_form(dim, b.degree)


def check_weak_differentiability(b: PiecewiseForm, arrangement: CoverArrangement,
                                 index: MultiIndex) -> ContinuityResult:
    """Compare tangential traces from both sides of every facet inside U_i."""
    n = arrangement.ambient_dim
    for pair in interface_pairs(arrangement, index):
        gamma = pair.forward.parameterization()
        low = pullback_affine(gamma, _piece_form(b, pair.lower, n))
        high = pullback_affine(gamma, _piece_form(b, pair.upper, n))
        if not low.same_form(high):
            logger.debug(
                "Trace jump on U_%s between %s and %s",
                format_multi_index(index), format_fragment(pair.lower), format_fragment(pair.upper),
            )
            return ContinuityResult(False, pair)
    return ContinuityResult(True)


def piecewise_derivative(b: PiecewiseForm, continuity: ContinuityResult) -> PiecewiseForm:
    if not continuity.verified:
        pair = continuity.witness
        where = f" across {format_fragment(pair.lower)}|{format_fragment(pair.upper)}" if pair else ""
        raise NotWeaklyDifferentiable(f"tangential trace jumps{where}", witness=pair)
    return b.derivative()


def difference_operator(a: CechElement, arrangement: CoverArrangement) -> CechElement:
    """(δa)_i = Σ_l (-1)^{k+l} a_{i∖l}|U_i on every i ∈ I^{p+1}."""
    p, q = a.bigrade.p, a.bigrade.q
    k = p + q
    index_set = arrangement.geometry.index_set
    components: Dict[MultiIndex, PiecewiseForm] = {}
    status: Dict[MultiIndex, str] = {}
    for i in index_set.level(p + 1):
        pieces = arrangement.pieces(i)
        total = PiecewiseForm(q, {})
        verified = True
        for l in range(len(i)):
            face = omit(i, l)
            if face not in index_set:
                continue
            sign = -1 if (k + l) % 2 else 1
            total = total + a.component(face).restrict(pieces).scale(sign)
            verified = verified and a.status.get(face) == VERIFIED
        components[i] = total
        status[i] = VERIFIED if verified else UNVERIFIED
    return CechElement(a.bigrade.horizontal(), components, status)


@dataclass
class ConformingSpace:
    """Kernel of the trace-jump constraints on the raw piecewise space of (i, q)."""
    index: MultiIndex
    degree: int
    pieces: List[FragmentKey]
    piece_size: int
    constraints: SDM
    kernel: linalg.NullSpace

    @property
    def raw_dim(self) -> int:
        return len(self.pieces) * self.piece_size

    @property
    def dim(self) -> int:
        return self.kernel.dimension

    def locate(self, raw_column: int) -> Tuple[FragmentKey, int]:
        return self.pieces[raw_column // self.piece_size], raw_column % self.piece_size


class CechDeRham:
    """Conforming spaces, operators and Gram matrices of A for one arrangement."""

    def __init__(self, arrangement: CoverArrangement, cap: int, family: str = UNIFORM):
        self.arrangement = arrangement
        self.cap = cap
        self.family = family
        self.n = arrangement.ambient_dim
        self.index_set = arrangement.geometry.index_set
        self.logger = logging.getLogger(f"{__name__}.CechDeRham")
        self._spaces: Dict[Tuple[MultiIndex, int], ConformingSpace] = {}

    def bigrades(self) -> List[BigradeIndex]:
        return [
            BigradeIndex(p, q)
            for p in range(self.index_set.top_level + 1)
            for q in range(self.n + 1)
        ]

    def local_basis(self, q: int, piece: Optional[FragmentKey] = None) -> List[PolyForm]:
        cell = self.arrangement.cell(piece) if piece is not None else None
        return form_basis(self.n, q, self.cap, self.family, cell)

    @cached_property
    def _traces(self) -> Dict[Tuple[FragmentKey, FragmentKey, int], List[PolyForm]]:
        """Traces of the local basis forms along each facet, keyed by (lower, upper, q)."""
        table = {}
        for pair in self.arrangement.facets:
            gamma = pair.forward.parameterization()
            for q in range(self.n + 1):
                table[(pair.lower, pair.upper, q)] = [pullback_affine(gamma, f) for f in self.local_basis(q)]
        return table

    def space(self, index: MultiIndex, q: int) -> ConformingSpace:
        key = (tuple(index), q)
        if key not in self._spaces:
            self._spaces[key] = self._build_space(tuple(index), q)
        return self._spaces[key]

    def _build_space(self, index: MultiIndex, q: int) -> ConformingSpace:
        pieces = self.arrangement.pieces(index)
        position = {m: k for k, m in enumerate(pieces)}
        size = len(self.local_basis(q))
        rows: Dict[int, Dict[int, object]] = {}
        row_keys: Dict[object, int] = {}
        for pair in interface_pairs(self.arrangement, index):
            for j, trace in enumerate(self._traces[(pair.lower, pair.upper, q)]):
                for basis_index, poly in trace.coefficients.items():
                    for exponent, coeff in poly.terms():
                        key = (pair.lower, pair.upper, basis_index, exponent)
                        row = row_keys.setdefault(key, len(row_keys))
                        entries = rows.setdefault(row, {})
                        entries[position[pair.lower] * size + j] = coeff
                        entries[position[pair.upper] * size + j] = -coeff
        constraints = linalg.from_dod(rows, (len(row_keys), len(pieces) * size))
        kernel = linalg.nullspace(constraints)
        self.logger.debug(
            "U_%s degree %d: %d raw, %d constraints, %d conforming",
            format_multi_index(index), q, len(pieces) * size, len(row_keys), kernel.dimension,
        )
        return ConformingSpace(index, q, pieces, size, constraints, kernel)

    def express(self, space: ConformingSpace, raw: SDM) -> SDM:
        """Conforming coordinates of raw columns; raises when a column is not conforming."""
        residual = linalg.matmul(space.constraints, raw) if space.constraints.shape[0] else None
        if residual is not None:
            witness = linalg.first_nonzero_column(residual)
            if witness is not None:
                raise NotWeaklyDifferentiable(
                    f"column {witness} is not tangentially continuous on U_{format_multi_index(space.index)}",
                    witness=witness,
                )
        return linalg.select_rows(raw, space.kernel.free_columns)

    # block layout

    def offsets(self, bigrade: BigradeIndex) -> Dict[MultiIndex, int]:
        offsets, cursor = {}, 0
        for i in self.index_set.level(bigrade.p):
            offsets[i] = cursor
            cursor += self.space(i, bigrade.q).dim
        return offsets

    def dim(self, bigrade: BigradeIndex) -> int:
        return sum(self.space(i, bigrade.q).dim for i in self.index_set.level(bigrade.p))

    def labels(self, bigrade: BigradeIndex) -> List[str]:
        labels = []
        for i in self.index_set.level(bigrade.p):
            space = self.space(i, bigrade.q)
            basis = self.local_basis(bigrade.q)
            for column in space.kernel.free_columns:
                piece, j = space.locate(column)
                labels.append(f"{format_multi_index(i)}@{format_fragment(piece)}:{basis[j]}")
        return labels

    # elements

    def element(self, bigrade: BigradeIndex, vector: Sequence[object]) -> CechElement:
        if len(vector) != self.dim(bigrade):
            raise ShapeMismatch(f"vector of length {len(vector)} for A^{bigrade.label()} of dimension {self.dim(bigrade)}")
        components, status = {}, {}
        offsets = self.offsets(bigrade)
        for i in self.index_set.level(bigrade.p):
            space = self.space(i, bigrade.q)
            coords = linalg.column(vector[offsets[i]:offsets[i] + space.dim])
            raw = linalg.column_values(linalg.matmul(space.kernel.basis, coords), 0) if space.dim else []
            pieces = {}
            for k, m in enumerate(space.pieces):
                chunk = raw[k * space.piece_size:(k + 1) * space.piece_size] if raw else []
                pieces[m] = from_coordinates(
                    chunk, self.n, bigrade.q, self.cap, self.family, self.arrangement.cell(m)
                )
            components[i] = PiecewiseForm(bigrade.q, pieces)
            status[i] = VERIFIED
        return CechElement(bigrade, components, status)

    def raw_vector(self, index: MultiIndex, b: PiecewiseForm) -> List[object]:
        space = self.space(index, b.degree)
        values: List[object] = []
        for m in space.pieces:
            values.extend(coordinates(_piece_form(b, m, self.n), self.cap, self.family))
        return values

    def vector(self, a: CechElement) -> List[object]:
        values: List[object] = []
        for i in self.index_set.level(a.bigrade.p):
            space = self.space(i, a.bigrade.q)
            raw = linalg.column(self.raw_vector(i, a.component(i)))
            values.extend(linalg.column_values(self.express(space, raw), 0))
        return values

    # operators

    def _local_derivative(self, q: int) -> SDM:
        source, target = self.local_basis(q), self.local_basis(q + 1)
        entries = {}
        for col, form in enumerate(source):
            for row, value in enumerate(coordinates(exterior_derivative(form), self.cap, self.family)):
                if value:
                    entries[(row, col)] = value
        return linalg.sparse(entries, (len(target), len(source)))

    def _vertical(self, b: BigradeIndex) -> OperatorMatrix:
        local = self._local_derivative(b.q)
        blocks = []
        for i in self.index_set.level(b.p):
            source, target = self.space(i, b.q), self.space(i, b.q + 1)
            raw = linalg.block_diagonal([local] * len(source.pieces))
            blocks.append(self.express(target, linalg.matmul(raw, source.kernel.basis)))
        return OperatorMatrix(b, b.vertical(), linalg.block_diagonal(blocks))

    def _restriction(self, source: ConformingSpace, target: ConformingSpace) -> SDM:
        position = {m: k for k, m in enumerate(source.pieces)}
        size = source.piece_size
        entries = {}
        for k, m in enumerate(target.pieces):
            for j in range(size):
                entries[(k * size + j, position[m] * size + j)] = QQ(1)
        return linalg.sparse(entries, (target.raw_dim, source.raw_dim))

    def _horizontal(self, b: BigradeIndex) -> OperatorMatrix:
        target_b = b.horizontal()
        source_offsets, target_offsets = self.offsets(b), self.offsets(target_b)
        rows: Dict[int, Dict[int, object]] = {}
        k = b.total
        for i in self.index_set.level(target_b.p):
            target = self.space(i, b.q)
            for l in range(len(i)):
                face = omit(i, l)
                if face not in self.index_set:
                    continue
                source = self.space(face, b.q)
                raw = linalg.matmul(self._restriction(source, target), source.kernel.basis)
                block = self.express(target, raw)
                if (k + l) % 2:
                    block = linalg.scale(block, -1)
                linalg.place(rows, block, target_offsets[i], source_offsets[face])
        return OperatorMatrix(b, target_b, linalg.from_dod(rows, (self.dim(target_b), self.dim(b))))

    def gram(self, b: BigradeIndex) -> SDM:
        local = {}
        blocks = []
        for i in self.index_set.level(b.p):
            space = self.space(i, b.q)
            raw_blocks = []
            for m in space.pieces:
                if m not in local:
                    local[m] = gram_matrix(self.local_basis(b.q, m), self.arrangement.cell(m))
                raw_blocks.append(local[m])
            raw = linalg.block_diagonal(raw_blocks)
            basis = space.kernel.basis
            blocks.append(linalg.matmul(linalg.transpose(basis), linalg.matmul(raw, basis)))
        return linalg.block_diagonal(blocks)

    @cached_property
    def assembled(self) -> AssembledComplex:
        horizontal, vertical, gram = {}, {}, {}
        top = self.index_set.top_level
        for b in self.bigrades():
            if b.q < self.n:
                vertical[b] = self._vertical(b)
            if b.p < top:
                horizontal[b] = self._horizontal(b)
            gram[b] = self.gram(b)
        blocks = {b: self.labels(b) for b in self.bigrades()}
        name = f"A({self.arrangement.geometry.name}, r={self.cap})"
        complex_ = AssembledComplex(name, blocks, horizontal, vertical, gram)
        self.logger.info("Assembled %s: dims %s", name, {b.label(): len(v) for b, v in blocks.items()})
        return complex_

    # element-level differentials

    def derivative(self, a: CechElement) -> CechElement:
        components, status = {}, {}
        for i, b in a.components.items():
            continuity = check_weak_differentiability(b, self.arrangement, i)
            components[i] = piecewise_derivative(b, continuity)
            status[i] = VERIFIED
        return CechElement(a.bigrade.vertical(), components, status)

    def difference(self, a: CechElement) -> CechElement:
        return difference_operator(a, self.arrangement)


def assemble(arrangement: CoverArrangement, cap: int, family: str = UNIFORM) -> AssembledComplex:
    """Every block with p up to the top level and q up to n, untruncated."""
    return CechDeRham(arrangement, cap, family).assembled


def truncate(c: AssembledComplex, n: int) -> TotalComplex:
    """Total complex cut at degree n, with T^n replaced by ker D^n.

    Degrees above n are dropped. The kernel basis is the echelon one, so
    D^{n-1} is re-expressed by reading its rows at the free columns.
    """
    full = total_complex(c)
    kernel = linalg.nullspace(full.D(n))
    dims = {k: d for k, d in full.dims.items() if k < n}
    dims[n] = kernel.dimension
    differential = {k: m for k, m in full.differential.items() if k < n - 1}
    if n - 1 in full.dims:
        differential[n - 1] = linalg.select_rows(full.D(n - 1), kernel.free_columns)
    gram = {k: g for k, g in full.gram.items() if k < n}
    if n in full.gram:
        basis = kernel.basis
        gram[n] = linalg.matmul(linalg.transpose(basis), linalg.matmul(full.gram[n], basis))
    blocks = {k: v for k, v in full.blocks.items() if k <= n}
    offsets = {b: o for b, o in full.offsets.items() if b.total <= n}
    logger.info("%s truncated at %d: ker D^%d has dimension %d", c.name, n, n, kernel.dimension)
    return TotalComplex(
        f"{c.name} truncated", blocks, dims, differential, gram, offsets, {n: kernel.basis}, n
    )


def nerve_complex(arrangement: CoverArrangement) -> AssembledComplex:
    """Constants only: the q = 0 row of A, i.e. the cochain complex of the nerve."""
    index_set = arrangement.geometry.index_set
    blocks: Dict[BigradeIndex, List[str]] = {}
    horizontal: Dict[BigradeIndex, OperatorMatrix] = {}
    for p in range(index_set.top_level + 1):
        blocks[BigradeIndex(p, 0)] = [format_multi_index(i) for i in index_set.level(p)]
    for p in range(index_set.top_level):
        source, target = index_set.level(p), index_set.level(p + 1)
        position = {i: k for k, i in enumerate(source)}
        entries = {}
        for row, i in enumerate(target):
            for l in range(len(i)):
                face = omit(i, l)
                if face in position:
                    entries[(row, position[face])] = QQ(-1) if (p + l) % 2 else QQ(1)
        horizontal[BigradeIndex(p, 0)] = OperatorMatrix(
            BigradeIndex(p, 0), BigradeIndex(p + 1, 0), linalg.sparse(entries, (len(target), len(source)))
        )
    name = f"nerve({arrangement.geometry.name})"
    return AssembledComplex(name, blocks, horizontal, {}, {})
