"""
Polynomial differential forms with exact rational coefficients.

A q-form on an n-dimensional chart (n <= 2) stores one polynomial per
strictly increasing index tuple I ⊆ {0..n-1}; ``(0, 1)`` stands for
dx∧dy. Coefficients live in the ring QQ[x, y]; one-dimensional charts only
use x and points use constants.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ, ring
from sympy.combinatorics.permutations import Permutation
from sympy.polys.matrices.sdm import SDM

from apps.core import linalg
from apps.core.exceptions import CellMismatch, DegreeMismatch, DegreeOverflow, NotAFace, ShapeMismatch

logger = logging.getLogger(__name__)

R, X, Y = ring("x,y", QQ)
GENERATORS = (X, Y)

UNIFORM = "uniform"
GRADED = "graded"
FAMILIES = (UNIFORM, GRADED)

Index = Tuple[int, ...]


def polynomial_degree(poly) -> int:
    monoms = poly.monoms()
    if not monoms:
        return -1
    return max(sum(m) for m in monoms)


def substitute(poly, images: Sequence[object]):
    """Simultaneous substitution x -> images[0], y -> images[1]."""
    images = list(images) + [R.zero] * (2 - len(images))
    powers: Dict[Tuple[int, int], object] = {}

    def power(var: int, n: int):
        key = (var, n)
        if key not in powers:
            powers[key] = images[var] ** n if n else R.one
        return powers[key]

    result = R.zero
    for (a, b), coeff in poly.terms():
        result += power(0, a) * power(1, b) * coeff
    return result


def evaluate(poly, point: Sequence[object]):
    coords = list(point) + [QQ(0)] * (2 - len(point))
    total = QQ(0)
    for (a, b), coeff in poly.terms():
        total += coeff * coords[0] ** a * coords[1] ** b
    return total


def monomials(dim: int, max_degree: int) -> List[Tuple[int, int]]:
    """Exponents of total degree <= max_degree in the first ``dim`` variables."""
    if max_degree < 0:
        return []
    if dim == 0:
        return [(0, 0)]
    if dim == 1:
        return [(a, 0) for a in range(max_degree + 1)]
    return [(a, total - a) for total in range(max_degree + 1) for a in range(total, -1, -1)]


def basis_tuples(dim: int, degree: int) -> List[Index]:
    if degree < 0 or degree > dim:
        return []
    return list(combinations(range(dim), degree))


def coefficient_cap(cap: int, degree: int, family: str) -> int:
    if family not in FAMILIES:
        raise ValueError(f"unknown polynomial family {family!r}")
    return cap if family == UNIFORM else cap - degree


def monomial(exponent: Tuple[int, int]):
    return X ** exponent[0] * Y ** exponent[1]


def _sorted_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the permutation sorting ``indices``; 0 on a repeat."""
    if len(set(indices)) != len(indices):
        return 0, ()
    order = sorted(range(len(indices)), key=lambda k: indices[k])
    sign = -1 if len(order) > 1 and Permutation(order).is_odd else 1
    return sign, tuple(sorted(indices))


@dataclass
class PolyForm:
    """A q-form Σ a_I dx_I on a cell of dimension ``dim``."""
    dim: int
    degree: int
    coefficients: Dict[Index, object] = field(default_factory=dict)
    cell: Optional[object] = None

    def __post_init__(self):
        valid = set(basis_tuples(self.dim, self.degree))
        clean = {}
        for index, poly in self.coefficients.items():
            index = tuple(index)
            if index not in valid:
                raise DegreeMismatch(f"{index} is not a basis tuple for {self.degree}-forms in dimension {self.dim}")
            poly = R(poly) if not hasattr(poly, "ring") else poly
            if poly:
                clean[index] = poly
        self.coefficients = clean

    def component(self, index: Index):
        return self.coefficients.get(tuple(index), R.zero)

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def coefficient_degree(self) -> int:
        return max((polynomial_degree(p) for p in self.coefficients.values()), default=-1)

    def on(self, cell) -> "PolyForm":
        return PolyForm(self.dim, self.degree, dict(self.coefficients), cell)

    def _combine(self, other: "PolyForm", sign: int) -> "PolyForm":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise DegreeMismatch(f"cannot add a {other.degree}-form to a {self.degree}-form")
        _check_cells(self, other)
        coeffs = dict(self.coefficients)
        for index, poly in other.coefficients.items():
            coeffs[index] = coeffs.get(index, R.zero) + poly * sign
        return PolyForm(self.dim, self.degree, coeffs, self.cell or other.cell)

    def __add__(self, other: "PolyForm") -> "PolyForm":
        return self._combine(other, 1)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self._combine(other, -1)

    def __neg__(self) -> "PolyForm":
        return self.scale(-1)

    def scale(self, factor) -> "PolyForm":
        factor = QQ.convert(factor)
        return PolyForm(self.dim, self.degree, {k: v * factor for k, v in self.coefficients.items()}, self.cell)

    def same_form(self, other: "PolyForm") -> bool:
        """Equality of the symbolic form, ignoring the cell."""
        return (self.dim, self.degree, self.coefficients) == (other.dim, other.degree, other.coefficients)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        names = "xy"
        parts = []
        for index, poly in sorted(self.coefficients.items()):
            basis = "∧".join(f"d{names[i]}" for i in index)
            parts.append(f"({poly.as_expr()}){' ' + basis if basis else ''}")
        return " + ".join(parts)


def _check_cells(a: PolyForm, b: PolyForm) -> None:
    if a.cell is not None and b.cell is not None and a.cell != b.cell:
        raise CellMismatch("forms live on different cells")


def zero_form(dim: int, degree: int, cell=None) -> PolyForm:
    return PolyForm(dim, degree, {}, cell)


def constant_form(value, dim: int, cell=None) -> PolyForm:
    return PolyForm(dim, 0, {(): R.one * QQ.convert(value)}, cell)


def form_basis(dim: int, degree: int, cap: int, family: str = UNIFORM, cell=None) -> List[PolyForm]:
    """Monomial basis x^a y^b dx_I of the capped space, ordered by I then monomial."""
    exps = monomials(dim, coefficient_cap(cap, degree, family))
    return [
        PolyForm(dim, degree, {index: monomial(e)}, cell)
        for index in basis_tuples(dim, degree)
        for e in exps
    ]


def basis_labels(dim: int, degree: int, cap: int, family: str = UNIFORM) -> List[str]:
    return [str(form) for form in form_basis(dim, degree, cap, family)]


def coordinates(form: PolyForm, cap: int, family: str = UNIFORM) -> List[object]:
    """Coordinates of ``form`` in ``form_basis``; raises if it does not fit."""
    exps = monomials(form.dim, coefficient_cap(cap, form.degree, family))
    position = {e: k for k, e in enumerate(exps)}
    values = [QQ(0)] * (len(exps) * len(basis_tuples(form.dim, form.degree)))
    tuples = basis_tuples(form.dim, form.degree)
    for index, poly in form.coefficients.items():
        block = tuples.index(index) * len(exps)
        for exponent, coeff in poly.terms():
            if exponent not in position:
                raise DegreeOverflow(f"monomial {exponent} exceeds the coefficient cap")
            values[block + position[exponent]] = coeff
    return values


def from_coordinates(values: Sequence[object], dim: int, degree: int, cap: int,
                     family: str = UNIFORM, cell=None) -> PolyForm:
    total = zero_form(dim, degree, cell)
    for value, basis in zip(values, form_basis(dim, degree, cap, family, cell)):
        if value:
            total = total + basis.scale(value)
    return total


def exterior_derivative(a: PolyForm, strict: bool = False) -> PolyForm:
    """dα = Σ_j Σ_I ∂_j a_I dx_j ∧ dx_I; a top-degree form maps to zero."""
    if a.degree >= a.dim:
        if strict:
            raise DegreeOverflow(f"no {a.degree + 1}-forms in dimension {a.dim}")
        return zero_form(a.dim, a.degree + 1, a.cell)
    coeffs: Dict[Index, object] = {}
    for index, poly in a.coefficients.items():
        for j in range(a.dim):
            sign, target = _sorted_sign((j,) + index)
            if not sign:
                continue
            partial = poly.diff(GENERATORS[j])
            if partial:
                coeffs[target] = coeffs.get(target, R.zero) + partial * sign
    return PolyForm(a.dim, a.degree + 1, coeffs, a.cell)


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.dim != b.dim:
        raise CellMismatch(f"cannot wedge forms on charts of dimension {a.dim} and {b.dim}")
    _check_cells(a, b)
    degree = a.degree + b.degree
    coeffs: Dict[Index, object] = {}
    if degree <= a.dim:
        for i, pa in a.coefficients.items():
            for j, pb in b.coefficients.items():
                sign, target = _sorted_sign(i + j)
                if sign:
                    coeffs[target] = coeffs.get(target, R.zero) + pa * pb * sign
    return PolyForm(a.dim, degree, coeffs, a.cell or b.cell)


def _minor(linear, rows: Index, cols: Index):
    if not rows:
        return QQ(1)
    if len(rows) == 1:
        return linear[rows[0]][cols[0]]
    (r0, r1), (c0, c1) = rows, cols
    return linear[r0][c0] * linear[r1][c1] - linear[r0][c1] * linear[r1][c0]


def pullback_affine(m, a: PolyForm) -> PolyForm:
    """Pull ``a`` back along the affine map y = L x + c.

    Coefficients are composed with the map and dy_I becomes
    Σ_J det(L[I, J]) dx_J.
    """
    if m.target_dim != a.dim:
        raise ShapeMismatch(f"map lands in dimension {m.target_dim}, form lives in dimension {a.dim}")
    images = [
        sum((GENERATORS[k] * row[k] for k in range(m.source_dim)), R.zero) + row_shift
        for row, row_shift in zip(m.linear, m.translation)
    ]
    coeffs: Dict[Index, object] = {}
    targets = basis_tuples(m.source_dim, a.degree)
    for index, poly in a.coefficients.items():
        composed = substitute(poly, images)
        if not composed:
            continue
        for target in targets:
            det = _minor(m.linear, index, target)
            if det:
                coeffs[target] = coeffs.get(target, R.zero) + composed * det
    return PolyForm(m.source_dim, a.degree, coeffs, m.domain)


def trace(a: PolyForm, face_map) -> PolyForm:
    """Restrict ``a`` to a face given by its affine inclusion map."""
    cell = a.cell
    if face_map.target_dim != a.dim or face_map.source_dim > a.dim:
        raise NotAFace("inclusion map does not land in the form's chart")
    if cell is not None and face_map.domain is not None:
        for vertex in face_map.domain.vertices:
            if not cell.contains(face_map(vertex)):
                raise NotAFace(f"face vertex {face_map(vertex)} lies outside the cell")
    return pullback_affine(face_map, a)


def integrate_polynomial(poly, cell, dim: int):
    if dim == 0:
        return evaluate(poly, ())
    if cell is None:
        raise CellMismatch("cannot integrate without a cell")
    total = QQ(0)
    for exponent, coeff in poly.terms():
        total += coeff * cell.moment(exponent)
    return total


def integrate(a: PolyForm):
    """Exact integral of a top-degree form over its cell."""
    if a.degree != a.dim:
        raise DegreeMismatch(f"cannot integrate a {a.degree}-form over a {a.dim}-dimensional cell")
    return integrate_polynomial(a.component(tuple(range(a.dim))), a.cell, a.dim)


def pointwise_product(a: PolyForm, b: PolyForm):
    """Σ_I a_I b_I, the integrand of the L² inner product."""
    if (a.dim, a.degree) != (b.dim, b.degree):
        raise DegreeMismatch("inner product needs forms of equal degree on equal charts")
    _check_cells(a, b)
    total = R.zero
    for index, poly in a.coefficients.items():
        other = b.coefficients.get(index)
        if other:
            total += poly * other
    return total


def inner_product_l2(a: PolyForm, b: PolyForm):
    return integrate_polynomial(pointwise_product(a, b), a.cell or b.cell, a.dim)


def gram_matrix(forms: Sequence[PolyForm], cell=None) -> SDM:
    entries = {}
    n = len(forms)
    for i in range(n):
        for j in range(i, n):
            value = inner_product_l2(forms[i].on(cell or forms[i].cell), forms[j].on(cell or forms[j].cell))
            if value:
                entries[(i, j)] = value
                entries[(j, i)] = value
    return linalg.sparse(entries, (n, n))


@dataclass
class PiecewiseForm:
    """Forms of one degree on the pieces of a cell partition, keyed by piece label."""
    degree: int
    pieces: Dict[object, PolyForm] = field(default_factory=dict)

    def restrict(self, labels: Iterable[object]) -> "PiecewiseForm":
        keep = set(labels)
        return PiecewiseForm(self.degree, {k: v for k, v in self.pieces.items() if k in keep})

    def derivative(self) -> "PiecewiseForm":
        return PiecewiseForm(self.degree + 1, {k: exterior_derivative(v) for k, v in self.pieces.items()})

    def norm_squared(self):
        return sum((inner_product_l2(v, v) for v in self.pieces.values()), QQ(0))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.pieces.values())

    def __add__(self, other: "PiecewiseForm") -> "PiecewiseForm":
        if self.degree != other.degree:
            raise DegreeMismatch("piecewise forms of different degree")
        pieces = dict(self.pieces)
        for key, form in other.pieces.items():
            pieces[key] = pieces[key] + form if key in pieces else form
        return PiecewiseForm(self.degree, pieces)

    def scale(self, factor) -> "PiecewiseForm":
        return PiecewiseForm(self.degree, {k: v.scale(factor) for k, v in self.pieces.items()})
