"""
Exact sparse linear algebra over QQ.

Thin helpers around sympy's ``SDM`` (a dict-of-dicts sparse matrix). Zero
entries are never stored, and every helper accepts zero-sized shapes.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

from .exceptions import ShapeMismatch, SingularGram

logger = logging.getLogger(__name__)

Shape = Tuple[int, int]


def sparse(entries: Dict[Tuple[int, int], object], shape: Shape) -> SDM:
    """Build an SDM from ``{(row, col): value}``, dropping zeros."""
    rows: Dict[int, Dict[int, object]] = {}
    for (i, j), value in entries.items():
        value = QQ.convert(value)
        if value:
            rows.setdefault(i, {})[j] = value
    return SDM(rows, shape, QQ)


def from_dod(rows: Dict[int, Dict[int, object]], shape: Shape) -> SDM:
    clean = {}
    for i, row in rows.items():
        kept = {j: QQ.convert(v) for j, v in row.items() if v}
        if kept:
            clean[i] = kept
    return SDM(clean, shape, QQ)


def from_rows(rows: Sequence[Sequence[object]], ncols: Optional[int] = None) -> SDM:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    entries = {
        (i, j): value for i, row in enumerate(rows) for j, value in enumerate(row)
    }
    return sparse(entries, (len(rows), ncols))


def column(values: Sequence[object]) -> SDM:
    return sparse({(i, 0): v for i, v in enumerate(values)}, (len(values), 1))


def zeros(shape: Shape) -> SDM:
    return SDM({}, shape, QQ)


def identity(n: int) -> SDM:
    return SDM({i: {i: QQ(1)} for i in range(n)}, (n, n), QQ)


def entry(matrix: SDM, i: int, j: int):
    return matrix.get(i, {}).get(j, QQ(0))


def to_rows(matrix: SDM) -> List[List[object]]:
    m, n = matrix.shape
    return [[entry(matrix, i, j) for j in range(n)] for i in range(m)]


def column_values(matrix: SDM, j: int) -> List[object]:
    return [entry(matrix, i, j) for i in range(matrix.shape[0])]


def matmul(a: SDM, b: SDM) -> SDM:
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros((a.shape[0], b.shape[1]))
    return a.matmul(b)


def add(a: SDM, b: SDM) -> SDM:
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot add {a.shape} and {b.shape}")
    rows = {i: dict(row) for i, row in a.items()}
    for i, row in b.items():
        target = rows.setdefault(i, {})
        for j, value in row.items():
            target[j] = target.get(j, QQ(0)) + value
    return from_dod(rows, a.shape)


def scale(a: SDM, factor) -> SDM:
    factor = QQ.convert(factor)
    return from_dod({i: {j: v * factor for j, v in row.items()} for i, row in a.items()}, a.shape)


def sub(a: SDM, b: SDM) -> SDM:
    return add(a, scale(b, -1))


def transpose(a: SDM) -> SDM:
    rows: Dict[int, Dict[int, object]] = {}
    for i, row in a.items():
        for j, value in row.items():
            rows.setdefault(j, {})[i] = value
    return SDM(rows, (a.shape[1], a.shape[0]), QQ)


def is_zero(a: SDM) -> bool:
    return all(not value for row in a.values() for value in row.values())


def nonzero_columns(a: SDM) -> List[int]:
    return sorted({j for row in a.values() for j, value in row.items() if value})


def hstack(blocks: Sequence[SDM], nrows: Optional[int] = None) -> SDM:
    if nrows is None:
        nrows = blocks[0].shape[0] if blocks else 0
    rows: Dict[int, Dict[int, object]] = {}
    offset = 0
    for block in blocks:
        if block.shape[0] != nrows:
            raise ShapeMismatch(f"hstack row count {block.shape[0]} != {nrows}")
        for i, row in block.items():
            target = rows.setdefault(i, {})
            for j, value in row.items():
                target[j + offset] = value
        offset += block.shape[1]
    return from_dod(rows, (nrows, offset))


def vstack(blocks: Sequence[SDM], ncols: Optional[int] = None) -> SDM:
    if ncols is None:
        ncols = blocks[0].shape[1] if blocks else 0
    rows: Dict[int, Dict[int, object]] = {}
    offset = 0
    for block in blocks:
        if block.shape[1] != ncols:
            raise ShapeMismatch(f"vstack column count {block.shape[1]} != {ncols}")
        for i, row in block.items():
            rows[i + offset] = dict(row)
        offset += block.shape[0]
    return from_dod(rows, (offset, ncols))


def block_diagonal(blocks: Sequence[SDM]) -> SDM:
    rows: Dict[int, Dict[int, object]] = {}
    row_offset = col_offset = 0
    for block in blocks:
        for i, row in block.items():
            rows[i + row_offset] = {j + col_offset: v for j, v in row.items()}
        row_offset += block.shape[0]
        col_offset += block.shape[1]
    return from_dod(rows, (row_offset, col_offset))


def place(target: Dict[int, Dict[int, object]], block: SDM, row_offset: int, col_offset: int) -> None:
    """Accumulate ``block`` into a dict-of-dicts at the given offsets."""
    for i, row in block.items():
        dest = target.setdefault(i + row_offset, {})
        for j, value in row.items():
            key = j + col_offset
            dest[key] = dest.get(key, QQ(0)) + value


def select_rows(a: SDM, rows: Sequence[int]) -> SDM:
    picked = {new: dict(a[old]) for new, old in enumerate(rows) if old in a}
    return from_dod(picked, (len(rows), a.shape[1]))


def select_columns(a: SDM, cols: Sequence[int]) -> SDM:
    index = {old: new for new, old in enumerate(cols)}
    rows = {}
    for i, row in a.items():
        kept = {index[j]: v for j, v in row.items() if j in index}
        if kept:
            rows[i] = kept
    return from_dod(rows, (a.shape[0], len(cols)))


def rref(a: SDM) -> Tuple[SDM, List[int]]:
    if 0 in a.shape or is_zero(a):
        return zeros(a.shape), []
    reduced, pivots = a.rref()
    return reduced, list(pivots)


def _rows_by_pivot(reduced: SDM) -> Dict[int, Dict[int, object]]:
    """Map each pivot column to its (normalised) echelon row."""
    return {min(row): row for row in reduced.values() if row}


def rank(a: SDM) -> int:
    return len(rref(a)[1])


@dataclass
class NullSpace:
    """Kernel basis read off the reduced row echelon form.

    ``basis`` has one column per free column of the input; the free-column
    rows of ``basis`` form an identity, so the coordinates of any kernel
    vector are its entries at ``free_columns``.
    """
    basis: SDM
    free_columns: List[int]
    pivots: List[int]

    @property
    def dimension(self) -> int:
        return len(self.free_columns)


def nullspace(a: SDM) -> NullSpace:
    ncols = a.shape[1]
    reduced, pivots = rref(a)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    by_pivot = _rows_by_pivot(reduced)
    rows: Dict[int, Dict[int, object]] = {}
    for k, f in enumerate(free):
        rows.setdefault(f, {})[k] = QQ(1)
        for col, row in by_pivot.items():
            value = row.get(f)
            if value:
                rows.setdefault(col, {})[k] = -value
    return NullSpace(from_dod(rows, (ncols, len(free))), free, pivots)


def column_basis(a: SDM) -> SDM:
    """Columns of ``a`` at the pivot positions of its echelon form."""
    _, pivots = rref(a)
    return select_columns(a, pivots)


def in_column_space(basis: SDM, vectors: SDM) -> bool:
    if vectors.shape[1] == 0:
        return True
    return rank(hstack([basis, vectors], basis.shape[0])) == rank(basis)


def solve(a: SDM, b: SDM) -> SDM:
    """Solve ``a x = b`` for square nonsingular ``a``."""
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise ShapeMismatch(f"cannot solve {a.shape} against {b.shape}")
    if n == 0:
        return zeros((0, b.shape[1]))
    reduced, pivots = rref(hstack([a, b], n))
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise SingularGram("matrix is singular")
    by_pivot = _rows_by_pivot(reduced)
    return from_dod(
        {i: {j - n: v for j, v in by_pivot.get(i, {}).items() if j >= n} for i in range(n)},
        (n, b.shape[1]),
    )


def solve_consistent(a: SDM, b: SDM) -> Optional[SDM]:
    """One solution of ``a x = b`` (free variables zero), or None."""
    m, n = a.shape
    if b.shape[0] != m:
        raise ShapeMismatch(f"cannot solve {a.shape} against {b.shape}")
    reduced, pivots = rref(hstack([a, b], m))
    if any(p >= n for p in pivots):
        return None
    by_pivot = _rows_by_pivot(reduced)
    rows: Dict[int, Dict[int, object]] = {}
    for p in pivots:
        row = by_pivot.get(p, {})
        kept = {j - n: v for j, v in row.items() if j >= n}
        if kept:
            rows[p] = kept
    return from_dod(rows, (n, b.shape[1]))


def least_norm_solution(a: SDM, b: SDM) -> Optional[SDM]:
    """The minimum Euclidean-norm solution of a consistent ``a x = b``.

    Solves ``a aᵀ y = b`` and returns ``aᵀ y``, which is the unique solution
    lying in the row space of ``a``.
    """
    if a.shape[0] == 0:
        return zeros((a.shape[1], b.shape[1]))
    at = transpose(a)
    y = solve_consistent(matmul(a, at), b)
    if y is None:
        return None
    x = matmul(at, y)
    if not is_zero(sub(matmul(a, x), b)):
        return None
    return x


def positive_definite_failure(gram: SDM) -> Optional[int]:
    """Index of the first non-positive pivot of an LDLᵀ sweep, or None.

    A non-symmetric matrix reports index -1.
    """
    n = gram.shape[0]
    if gram.shape != (n, n):
        raise ShapeMismatch(f"Gram matrix must be square, got {gram.shape}")
    if not is_zero(sub(gram, transpose(gram))):
        return -1
    work = [list(row) for row in to_rows(gram)]
    for k in range(n):
        pivot = work[k][k]
        if pivot <= 0:
            return k
        for i in range(k + 1, n):
            factor = work[i][k] / pivot
            if factor:
                for j in range(k, n):
                    work[i][j] -= factor * work[k][j]
    return None


def is_positive_definite(gram: SDM) -> bool:
    return positive_definite_failure(gram) is None


def first_nonzero_column(a: SDM) -> Optional[int]:
    cols = nonzero_columns(a)
    return cols[0] if cols else None


def quadratic_form(gram: SDM, vector: Iterable[object]):
    """vᵀ G v for a plain sequence v."""
    values = [QQ.convert(v) for v in vector]
    total = QQ(0)
    for i, row in gram.items():
        if not values[i]:
            continue
        acc = QQ(0)
        for j, g in row.items():
            acc += g * values[j]
        total += values[i] * acc
    return total
