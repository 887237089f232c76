"""
Recursive graph norms, as exact squared values.

Both norms add the L² norms of a form and of its derivative to the norms of
its restrictions one level down, recursing over immediate cofaces so that a
face reached along several paths is counted once per path.
"""

import logging
from typing import Dict, Optional

from sympy import QQ

from apps.cech.complex import check_weak_differentiability, piecewise_derivative
from apps.geometry.cover import CoverArrangement
from apps.geometry.simplices import MultiIndex, SimplicialGeometry

from .polyform import PiecewiseForm, PolyForm, exterior_derivative, inner_product_l2, pullback_affine

logger = logging.getLogger(__name__)

Weights = Optional[Dict[MultiIndex, object]]


def _weight(weights: Weights, index: MultiIndex):
    if not weights:
        return QQ(1)
    return QQ.convert(weights.get(tuple(index), 1))


def graph_norm_simplicial(a: PolyForm, index: MultiIndex, geometry: SimplicialGeometry,
                          weights: Weights = None):
    """‖a‖² + ‖da‖² + Σ_j N(tr_j a) over immediate cofaces j of i."""
    index = tuple(index)
    a = a.on(geometry.chart(index))
    da = exterior_derivative(a)
    own = inner_product_l2(a, a)
    if not da.is_zero():
        own += inner_product_l2(da, da)
    total = _weight(weights, index) * own
    for j in geometry.index_set.cofaces(index):
        restricted = pullback_affine(geometry.inclusion(index, j), a)
        total += graph_norm_simplicial(restricted, j, geometry, weights)
    return total


def graph_norm_cech(b: PiecewiseForm, index: MultiIndex, arrangement: CoverArrangement,
                    weights: Weights = None):
    """‖b‖² + ‖db‖² on U_i plus the norms of b|U_j over immediate cofaces j.

    db is taken piecewise after the tangential traces have been checked.

    The recursion walks immediate cofaces, so a deeper index k ⊃ i is
    reached once per chain i ⊂ j ⊂ ... ⊂ k and its term is counted that
    many times. This multiplicity is part of the norm on I_i and matches
    graph_norm_simplicial, which recurses the same way.
    """
    index = tuple(index)
    pieces = arrangement.pieces(index)
    local = PiecewiseForm(
        b.degree,
        {key: form.on(arrangement.cell(key)) for key, form in b.pieces.items() if key in pieces},
    )
    if local.is_zero():
        return QQ(0)
    continuity = check_weak_differentiability(local, arrangement, index)
    db = piecewise_derivative(local, continuity)
    total = _weight(weights, index) * (local.norm_squared() + db.norm_squared())
    for j in arrangement.geometry.index_set.cofaces(index):
        total += graph_norm_cech(local.restrict(arrangement.pieces(j)), j, arrangement, weights)
    return total
