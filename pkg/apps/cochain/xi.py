"""
The cochain map Ξ: S^{p,q} -> A^{p,q} and its verification.

On every fragment of a piece Ũ_m of U_i, Ξ(a)_i is the pullback of a_i along
the piece map ρ_{i,m} (projection onto Ω_m followed by the inclusion of Ω_m
into Ω_i). Because ρ_{i,m} factors through Ω_m, forms whose degree exceeds
dim Ω_m are sent to zero there.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Collection, Dict, List, Mapping, Optional

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from apps.cech.complex import CechDeRham, CechElement, check_weak_differentiability
from apps.core import linalg
from apps.core.complexes import BigradeIndex, ChainMapBlock, CommutationReport, check_cochain_map
from apps.core.exceptions import ArrangementMismatch
from apps.forms.polyform import (
    UNIFORM,
    PiecewiseForm,
    PolyForm,
    form_basis,
    integrate,
    pullback_affine,
    wedge,
    zero_form,
)
from apps.geometry.cover import CoverArrangement, FragmentKey, OrientedFacet, format_fragment, interface_pairs
from apps.geometry.simplices import MultiIndex, SimplicialGeometry, format_multi_index
from apps.simplicial.complex import SimplicialDeRham, SimplicialElement

logger = logging.getLogger(__name__)

Skip = Mapping[BigradeIndex, Collection[MultiIndex]]


@dataclass
class XiConfig:
    geometry: SimplicialGeometry
    arrangement: CoverArrangement
    cap: int
    weighted_mode: bool = False
    family: str = UNIFORM

    def __post_init__(self):
        if self.arrangement.geometry is not self.geometry:
            raise ArrangementMismatch("the arrangement was built from a different geometry")

    @cached_property
    def simplicial(self) -> SimplicialDeRham:
        return SimplicialDeRham(self.geometry, self.cap, self.family)

    @cached_property
    def cech(self) -> CechDeRham:
        return CechDeRham(self.arrangement, self.cap, self.family)


def pulled_back(cfg: XiConfig, index: MultiIndex, form: PolyForm,
                skip: Collection[MultiIndex] = ()) -> PiecewiseForm:
    """Ξ of one component: the pullback of ``form`` on Ω_i to every fragment of U_i.

    Fragments of the pieces named in ``skip`` get zero instead.
    """
    form = form.on(cfg.geometry.chart(index))
    pieces = {}
    for key in cfg.arrangement.pieces(index):
        if key.piece in skip:
            pieces[key] = zero_form(cfg.arrangement.ambient_dim, form.degree, cfg.arrangement.cell(key))
        else:
            pieces[key] = pullback_affine(cfg.arrangement.piece_map(index, key), form)
    return PiecewiseForm(form.degree, pieces)


def xi_apply(a: SimplicialElement, cfg: XiConfig, skip: Collection[MultiIndex] = ()) -> CechElement:
    index_set = cfg.geometry.index_set
    components, status = {}, {}
    for i, form in a.components.items():
        if i not in index_set or len(i) != a.bigrade.p + 1:
            raise ArrangementMismatch(f"component {format_multi_index(i)} does not belong to level {a.bigrade.p}")
        components[i] = pulled_back(cfg, i, form, skip)
        status[i] = check_weak_differentiability(components[i], cfg.arrangement, i).status
    return CechElement(a.bigrade, components, status)


@dataclass
class RelationCheck:
    relation: str
    bigrade: BigradeIndex
    passed: bool
    witness: Optional[int] = None


@dataclass
class RelationReport:
    checks: List[RelationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> List[RelationCheck]:
        return [check for check in self.checks if not check.passed]


@dataclass
class InterfaceResidual:
    index: MultiIndex
    lower: FragmentKey
    upper: FragmentKey
    test_form: str
    forward: object
    backward: object

    @property
    def residual(self):
        return self.forward + self.backward


@dataclass
class CancellationReport:
    residuals: List[InterfaceResidual] = field(default_factory=list)
    totals: Dict[MultiIndex, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.residual == 0 for r in self.residuals) and all(t == 0 for t in self.totals.values())

    def first_failure(self) -> Optional[InterfaceResidual]:
        return next((r for r in self.residuals if r.residual != 0), None)


def oriented_integral(form: PolyForm, facet: OrientedFacet):
    """∫ of an (n-1)-form over an oriented facet; in 1D the signed point value."""
    image = pullback_affine(facet.parameterization(), form)
    if facet.dim == 0:
        return facet.sign * integrate(image)
    return integrate(image)


class XiMap:
    """Assembled Ξ blocks and the checks run on them."""

    def __init__(self, cfg: XiConfig):
        self.cfg = cfg
        self.logger = logging.getLogger(f"{__name__}.XiMap")

    def block(self, bigrade: BigradeIndex, skip: Collection[MultiIndex] = (), strict: bool = True) -> ChainMapBlock:
        """Ξ^{p,q} from the S basis to the conforming A basis, block diagonal over i ∈ I^p.

        With ``strict`` off a non-conforming image is read at the free columns
        instead of raising; only corrupted maps need that.
        """
        s, a = self.cfg.simplicial, self.cfg.cech
        blocks = []
        for i in self.cfg.geometry.index_set.level(bigrade.p):
            space = a.space(i, bigrade.q)
            basis = s.chart_basis(i, bigrade.q)
            entries = {}
            for col, form in enumerate(basis):
                for row, value in enumerate(a.raw_vector(i, pulled_back(self.cfg, i, form, skip))):
                    if value:
                        entries[(row, col)] = value
            raw = linalg.sparse(entries, (space.raw_dim, len(basis)))
            if strict:
                blocks.append(a.express(space, raw))
            else:
                blocks.append(linalg.select_rows(raw, space.kernel.free_columns))
        return ChainMapBlock(bigrade, linalg.block_diagonal(blocks))

    def matrices(self, skip: Optional[Skip] = None) -> Dict[BigradeIndex, ChainMapBlock]:
        skip = skip or {}
        result = {
            b: self.block(b, skip.get(b, ()), strict=b not in skip)
            for b in self.cfg.simplicial.bigrades()
        }
        self.logger.info("Ξ blocks: %s", {b.label(): block.matrix.shape for b, block in result.items()})
        return result

    @cached_property
    def blocks(self) -> Dict[BigradeIndex, ChainMapBlock]:
        return self.matrices()

    def _xi_or_zero(self, bigrade: BigradeIndex) -> SDM:
        block = self.blocks.get(bigrade)
        if block is None:
            return linalg.zeros((self.cfg.cech.dim(bigrade), 0))
        return block.matrix

    def verify_cochain_property(self, skip: Optional[Skip] = None) -> CommutationReport:
        xi = self.matrices(skip) if skip else self.blocks
        return check_cochain_map(self.cfg.simplicial.assembled, self.cfg.cech.assembled, xi)

    def verify_truncation(self) -> RelationReport:
        """d_A Ξω = 0 and δ_A Ξω = 0 for every basis ω of total degree n."""
        n = self.cfg.geometry.ambient_dim
        c = self.cfg.cech.assembled
        report = RelationReport()
        for b, block in self.blocks.items():
            if b.total != n:
                continue
            for relation, op in (("d", c.d(b)), ("delta", c.delta(b))):
                witness = linalg.first_nonzero_column(linalg.matmul(op, block.matrix))
                report.checks.append(RelationCheck(relation, b, witness is None, witness))
        return report

    def check_injectivity(self) -> RelationReport:
        report = RelationReport()
        for b, block in self.blocks.items():
            rank = linalg.rank(block.matrix)
            report.checks.append(RelationCheck("injective", b, rank == block.matrix.shape[1]))
        return report

    def check_subcomplex(self) -> RelationReport:
        """The Ξ image is closed under d_A and δ_A (exact column-space membership)."""
        c = self.cfg.cech.assembled
        report = RelationReport()
        for b, block in self.blocks.items():
            for relation, op, step in (("d", c.d(b), b.vertical()), ("delta", c.delta(b), b.horizontal())):
                if c.dim(step) == 0:
                    continue
                image = linalg.matmul(op, block.matrix)
                closed = linalg.in_column_space(self._xi_or_zero(step), image)
                report.checks.append(RelationCheck(f"closed_{relation}", b, closed))
        return report

    def verify_weak_derivative_cancellation(self, a: SimplicialElement, test_degree: int,
                                            extension: Optional[CechElement] = None) -> CancellationReport:
        """Interior boundary integrals of Ξa against capped test forms cancel pairwise.

        ``extension`` replaces Ξa, so a deliberately broken extension can be checked.
        """
        arr = self.cfg.arrangement
        n = arr.ambient_dim
        image = extension if extension is not None else xi_apply(a, self.cfg)
        degree = n - 1 - a.bigrade.q
        tests = form_basis(n, degree, test_degree) if degree >= 0 else []
        report = CancellationReport()
        for i, b in image.components.items():
            total = QQ(0)
            for pair in interface_pairs(arr, i):
                low = b.pieces.get(pair.lower, zero_form(n, b.degree))
                high = b.pieces.get(pair.upper, zero_form(n, b.degree))
                for beta in tests:
                    forward = oriented_integral(wedge(low, beta.on(low.cell)), pair.forward)
                    backward = oriented_integral(wedge(high, beta.on(high.cell)), pair.backward)
                    report.residuals.append(
                        InterfaceResidual(i, pair.lower, pair.upper, str(beta), forward, backward)
                    )
                    total += forward + backward
            report.totals[i] = total
        if not report.passed:
            failure = report.first_failure()
            if failure is not None:
                self.logger.warning(
                    "Interface integrals do not cancel on U_%s across %s|%s",
                    format_multi_index(failure.index),
                    format_fragment(failure.lower),
                    format_fragment(failure.upper),
                )
        return report


def verify_cochain_property(cfg: XiConfig, skip: Optional[Skip] = None) -> CommutationReport:
    return XiMap(cfg).verify_cochain_property(skip)


def verify_truncation(cfg: XiConfig) -> RelationReport:
    return XiMap(cfg).verify_truncation()


def verify_weak_derivative_cancellation(cfg: XiConfig, a: SimplicialElement, test_degree: int,
                                        extension: Optional[CechElement] = None) -> CancellationReport:
    return XiMap(cfg).verify_weak_derivative_cancellation(a, test_degree, extension)
