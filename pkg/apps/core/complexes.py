"""
Double complexes over QQ.

An ``AssembledComplex`` stores, per bigrade (p, q), a list of basis labels,
the horizontal differential δ: (p, q) -> (p+1, q), the vertical differential
d: (p, q) -> (p, q+1) and the L² Gram matrix. The total complex uses the
anticommuting convention D = d + δ, with blocks ordered by increasing p
inside each total degree.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from . import linalg
from .exceptions import AxiomViolation, ShapeMismatch, SingularGram

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class BigradeIndex:
    """Bigrade (p, q): p is the overlap / codimension level, q the form degree."""
    p: int
    q: int

    @property
    def total(self) -> int:
        return self.p + self.q

    def horizontal(self) -> "BigradeIndex":
        return BigradeIndex(self.p + 1, self.q)

    def vertical(self) -> "BigradeIndex":
        return BigradeIndex(self.p, self.q + 1)

    def label(self) -> str:
        return f"{self.p},{self.q}"


@dataclass
class OperatorMatrix:
    source: BigradeIndex
    target: BigradeIndex
    matrix: SDM

    def __post_init__(self):
        step = (self.target.p - self.source.p, self.target.q - self.source.q)
        if step not in ((1, 0), (0, 1)):
            raise ShapeMismatch(f"{self.source} -> {self.target} is not a single bigrade step")

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]


@dataclass
class ChainMapBlock:
    """One block of a bigrade-preserving map between two double complexes."""
    bigrade: BigradeIndex
    matrix: SDM


@dataclass
class AssembledComplex:
    name: str
    blocks: Dict[BigradeIndex, List[str]]
    horizontal: Dict[BigradeIndex, OperatorMatrix] = field(default_factory=dict)
    vertical: Dict[BigradeIndex, OperatorMatrix] = field(default_factory=dict)
    gram: Dict[BigradeIndex, SDM] = field(default_factory=dict)

    def dim(self, bigrade: BigradeIndex) -> int:
        return len(self.blocks.get(bigrade, ()))

    def bigrades(self) -> List[BigradeIndex]:
        return sorted(self.blocks)

    def total_degrees(self) -> List[int]:
        return sorted({b.total for b in self.blocks})

    def delta(self, bigrade: BigradeIndex) -> SDM:
        """δ out of ``bigrade``; the zero map when no operator is stored."""
        op = self.horizontal.get(bigrade)
        if op is None:
            return linalg.zeros((self.dim(bigrade.horizontal()), self.dim(bigrade)))
        return op.matrix

    def d(self, bigrade: BigradeIndex) -> SDM:
        op = self.vertical.get(bigrade)
        if op is None:
            return linalg.zeros((self.dim(bigrade.vertical()), self.dim(bigrade)))
        return op.matrix


@dataclass
class AxiomFailure:
    rule: str
    bigrade: BigradeIndex
    witness: int


@dataclass
class AxiomReport:
    horizontal_ok: bool = True
    vertical_ok: bool = True
    anticommute_ok: bool = True
    failure: Optional[AxiomFailure] = None

    @property
    def passed(self) -> bool:
        return self.horizontal_ok and self.vertical_ok and self.anticommute_ok


def _check_shapes(c: AssembledComplex) -> None:
    for table in (c.horizontal, c.vertical):
        for bigrade, op in table.items():
            if op.source != bigrade:
                raise ShapeMismatch(f"operator stored at {bigrade} starts at {op.source}")
            expected = (c.dim(op.target), c.dim(op.source))
            if op.matrix.shape != expected:
                raise ShapeMismatch(
                    f"operator {op.source}->{op.target} has shape {op.matrix.shape}, expected {expected}"
                )
    for bigrade, gram in c.gram.items():
        n = c.dim(bigrade)
        if gram.shape != (n, n):
            raise ShapeMismatch(f"Gram at {bigrade} has shape {gram.shape}, expected {(n, n)}")


def verify_double_complex(c: AssembledComplex) -> AxiomReport:
    """Check δδ = 0, dd = 0 and dδ + δd = 0 exactly at every bigrade."""
    _check_shapes(c)
    report = AxiomReport()
    for b in c.bigrades():
        if c.dim(b) == 0:
            continue
        checks = (
            ("horizontal", linalg.matmul(c.delta(b.horizontal()), c.delta(b))),
            ("vertical", linalg.matmul(c.d(b.vertical()), c.d(b))),
            (
                "anticommute",
                linalg.add(
                    linalg.matmul(c.d(b.horizontal()), c.delta(b)),
                    linalg.matmul(c.delta(b.vertical()), c.d(b)),
                ),
            ),
        )
        for rule, residual in checks:
            witness = linalg.first_nonzero_column(residual)
            if witness is None:
                continue
            setattr(report, f"{rule}_ok", False)
            if report.failure is None:
                report.failure = AxiomFailure(rule, b, witness)
                logger.warning("%s: %s identity fails at %s (basis %d)", c.name, rule, b, witness)
    return report


@dataclass
class TotalComplex:
    """Anti-diagonal sums T^k = ⊕_{p+q=k} C^{p,q} with D_k: T^k -> T^{k+1}."""
    name: str
    blocks: Dict[int, List[BigradeIndex]]
    dims: Dict[int, int]
    differential: Dict[int, SDM]
    gram: Dict[int, SDM] = field(default_factory=dict)
    offsets: Dict[BigradeIndex, int] = field(default_factory=dict)
    kernel_basis: Dict[int, SDM] = field(default_factory=dict)
    truncated_at: Optional[int] = None

    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def D(self, k: int) -> SDM:
        matrix = self.differential.get(k)
        if matrix is None:
            return linalg.zeros((self.dims.get(k + 1, 0), self.dims.get(k, 0)))
        return matrix


def total_complex(c: AssembledComplex, check: bool = True) -> TotalComplex:
    if check:
        report = verify_double_complex(c)
        if not report.passed:
            raise AxiomViolation(f"{c.name}: {report.failure.rule} identity fails at {report.failure.bigrade}")
    blocks: Dict[int, List[BigradeIndex]] = {}
    for b in c.bigrades():
        blocks.setdefault(b.total, []).append(b)
    offsets: Dict[BigradeIndex, int] = {}
    dims: Dict[int, int] = {}
    for k, members in blocks.items():
        members.sort(key=lambda b: b.p)
        offset = 0
        for b in members:
            offsets[b] = offset
            offset += c.dim(b)
        dims[k] = offset

    differential: Dict[int, SDM] = {}
    for k in sorted(blocks):
        if k + 1 not in dims:
            continue
        rows: Dict[int, Dict[int, object]] = {}
        for b in blocks[k]:
            col = offsets[b]
            for target, matrix in ((b.vertical(), c.d(b)), (b.horizontal(), c.delta(b))):
                if target in offsets and c.dim(target):
                    linalg.place(rows, matrix, offsets[target], col)
        differential[k] = linalg.from_dod(rows, (dims[k + 1], dims[k]))

    gram: Dict[int, SDM] = {}
    if c.gram:
        for k, members in blocks.items():
            gram[k] = linalg.block_diagonal(
                [c.gram.get(b, linalg.identity(c.dim(b))) for b in members]
            )
    total = TotalComplex(c.name, blocks, dims, differential, gram, offsets)
    logger.info("%s: total complex dims %s", c.name, [dims[k] for k in sorted(dims)])
    return total


def betti_numbers(t: TotalComplex) -> List[int]:
    """dim ker D^k - rank D^{k-1} for every degree from 0 to the top."""
    if not t.dims:
        return []
    top = max(t.dims)
    ranks = {k: linalg.rank(t.D(k)) for k in range(top + 1)}
    betti = []
    for k in range(top + 1):
        kernel = t.dims.get(k, 0) - ranks[k]
        betti.append(kernel - ranks.get(k - 1, 0))
    return betti


@dataclass
class HodgeParts:
    exact: List[object]
    harmonic: List[object]
    coexact: List[object]


def _project(basis: SDM, gram: SDM, vector: SDM) -> SDM:
    """G-orthogonal projection of ``vector`` onto the column span of ``basis``."""
    if basis.shape[1] == 0:
        return linalg.zeros(vector.shape)
    bt_g = linalg.matmul(linalg.transpose(basis), gram)
    coeffs = linalg.solve(linalg.matmul(bt_g, basis), linalg.matmul(bt_g, vector))
    return linalg.matmul(basis, coeffs)


def hodge_decompose(
    t: TotalComplex,
    k: int,
    v: Sequence[object],
    grams: Optional[Mapping[int, SDM]] = None,
) -> HodgeParts:
    """Split v into exact + harmonic + coexact parts, orthogonal in the Gram metric.

    The adjoint is D* = G_k^{-1} D_kᵀ G_{k+1}; its range is G_k^{-1} applied to
    the column space of D_kᵀ.
    """
    grams = dict(t.gram) if grams is None else dict(grams)
    n = t.dims.get(k, 0)
    if len(v) != n:
        raise ShapeMismatch(f"vector of length {len(v)} in degree {k} of dimension {n}")
    gram = grams.get(k, linalg.identity(n))
    failure = linalg.positive_definite_failure(gram)
    if failure is not None:
        raise SingularGram(f"Gram matrix in degree {k} is not positive-definite (pivot {failure})")
    vector = linalg.column(v)

    exact = _project(linalg.column_basis(t.D(k - 1)), gram, vector)
    coexact_span = linalg.column_basis(linalg.transpose(t.D(k)))
    if coexact_span.shape[1]:
        coexact_span = linalg.solve(gram, coexact_span)
    coexact = _project(coexact_span, gram, vector)
    harmonic = linalg.sub(linalg.sub(vector, exact), coexact)
    return HodgeParts(
        exact=linalg.column_values(exact, 0),
        harmonic=linalg.column_values(harmonic, 0),
        coexact=linalg.column_values(coexact, 0),
    )


def gram_inner(gram: SDM, a: Sequence[object], b: Sequence[object]):
    total = QQ(0)
    for i, row in gram.items():
        if not a[i]:
            continue
        for j, value in row.items():
            total += QQ.convert(a[i]) * value * QQ.convert(b[j])
    return total


@dataclass
class CommutationCheck:
    relation: str
    source: BigradeIndex
    target: BigradeIndex
    passed: bool
    witness: Optional[int] = None


@dataclass
class CommutationReport:
    checks: List[CommutationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_bigrades(self) -> List[BigradeIndex]:
        return sorted({check.target for check in self.checks if not check.passed})


def check_cochain_map(
    src: AssembledComplex,
    dst: AssembledComplex,
    xi: Mapping[BigradeIndex, ChainMapBlock],
) -> CommutationReport:
    """Verify Ξd = dΞ and Ξδ = δΞ block by block.

    A relation is keyed by the bigrade it lands in. A bigrade missing from
    ``src`` counts as the zero space.
    """
    for b, op in xi.items():
        expected = (dst.dim(b), src.dim(b))
        if op.matrix.shape != expected:
            raise ShapeMismatch(f"Ξ at {b} has shape {op.matrix.shape}, expected {expected}")

    def xi_at(b: BigradeIndex) -> SDM:
        op = xi.get(b)
        if op is None:
            return linalg.zeros((dst.dim(b), src.dim(b)))
        return op.matrix

    report = CommutationReport()
    for b in sorted(set(src.blocks) | set(xi)):
        if src.dim(b) == 0:
            continue
        for relation, step, src_op, dst_op in (
            ("d", b.vertical(), src.d(b), dst.d(b)),
            ("delta", b.horizontal(), src.delta(b), dst.delta(b)),
        ):
            if dst.dim(step) == 0:
                continue
            left = linalg.matmul(xi_at(step), src_op) if src.dim(step) else linalg.zeros((dst.dim(step), src.dim(b)))
            right = linalg.matmul(dst_op, xi_at(b))
            witness = linalg.first_nonzero_column(linalg.sub(left, right))
            report.checks.append(CommutationCheck(relation, b, step, witness is None, witness))
            if witness is not None:
                logger.warning("cochain map fails for %s from %s to %s (basis %d)", relation, b, step, witness)
    return report
