"""
Norm bounds for Ξ.

All quantities are squared so that they stay rational. For a piece Ũ_m and
a degree q, κ_m(q) = (lower, upper) encloses ‖ρ^*β‖²_{Ũ_m} / ‖β‖²_{Ω_m} over
q-forms β on Ω_m. The projection is affine on each fragment, so:

    trimmed cell, map A   0-forms 1/det A, 2-forms det A, 1-forms
                          σ_min²/det A to σ_max²/det A (in 1D, 1/A and A)
    band                  inf and sup of W_q(t) = Σ_f w_f(t) |g_f|^{2q}, the
                          density the fragments push onto the edge chart
    corner / 1D band      measure of the piece (0-forms only)

w_f is the tent of fibre lengths of fragment f over its image and g_f the
gradient of its projection. When σ² is irrational the rational envelope
[det² / F, F] with F = ‖A‖²_F is used instead.

C(ε_m)² and c(ε_m)² are the largest upper and smallest lower end over the
degrees the piece carries. Weighted mode scales the simplicial norm on Ω_m
by C(ε_m)².
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import QQ

from apps.core.exceptions import DegenerateBand
from apps.core.rationals import rational_sqrt
from apps.forms.norms import graph_norm_cech, graph_norm_simplicial
from apps.geometry.polygons import dot
from apps.geometry.simplices import MultiIndex, format_multi_index

from .xi import XiConfig, xi_apply

logger = logging.getLogger(__name__)

DEFAULT_RANGE = 100

Factors = Dict[int, Tuple[object, object]]


def singular_squares(linear) -> Tuple[object, object]:
    """(σ_min², σ_max²) of a 2x2 matrix, or the rational envelope around them."""
    frobenius = sum((x * x for row in linear for x in row), QQ(0))
    det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0]
    root = rational_sqrt(frobenius * frobenius - 4 * det * det)
    if root is None:
        return det * det / frobenius, frobenius
    return (frobenius - root) / 2, (frobenius + root) / 2


def _tent(images, peak, t):
    t0, t1, t2 = images
    if t <= t0 or t >= t2:
        return QQ(0)
    if t < t1:
        return peak * (t - t0) / (t1 - t0)
    if t > t1:
        return peak * (t2 - t) / (t2 - t1)
    return peak


def _density(tents, q: int, t):
    return sum((_tent(images, peak, t) * weight ** q for images, peak, weight in tents), QQ(0))


def _merge(factors: Factors, q: int, low, high) -> None:
    if q in factors:
        low, high = min(low, factors[q][0]), max(high, factors[q][1])
    factors[q] = (low, high)


@dataclass
class BoundEstimate:
    c1_squared: object
    c2_squared: object
    per_index_factors: Dict[MultiIndex, Tuple[object, object]]
    sample_ratios: List[object] = field(default_factory=list)
    skipped: int = 0
    weighted: bool = False

    @property
    def lower(self):
        return 1 / self.c2_squared

    @property
    def upper(self):
        return self.c1_squared

    def violations(self) -> List[object]:
        return [r for r in self.sample_ratios if not self.lower <= r <= self.upper]

    @property
    def passed(self) -> bool:
        return not self.violations()

    @property
    def extremes(self) -> Optional[Tuple[object, object]]:
        if not self.sample_ratios:
            return None
        return min(self.sample_ratios), max(self.sample_ratios)


class BoundEstimator:
    def __init__(self, cfg: XiConfig, samples: int = 0, seed: int = 0, value_range: int = DEFAULT_RANGE):
        if samples < 0:
            raise ValueError("sample count must be non-negative")
        self.cfg = cfg
        self.samples = samples
        self.seed = seed
        self.value_range = value_range
        self.logger = logging.getLogger(f"{__name__}.BoundEstimator")

    def pullback_factors(self, piece: MultiIndex) -> Factors:
        """κ_m(q) = (lower, upper) for every degree q the piece carries."""
        piece = tuple(piece)
        arr = self.cfg.arrangement
        if self.cfg.geometry.simplex_dim(piece) == 0:
            measure = arr.piece_measure(piece)
            factors = {0: (measure, measure)}
        elif len(piece) == 1:
            factors = self._cell_factors(piece)
        else:
            factors = self._band_factors(piece)
        for q, (lower, _) in factors.items():
            if lower <= 0:
                raise DegenerateBand(f"piece {format_multi_index(piece)} has pullback factor {lower} in degree {q}")
        return factors

    def _cell_factors(self, piece: MultiIndex) -> Factors:
        arr = self.cfg.arrangement
        factors: Factors = {}
        for key in arr.parts(piece):
            linear = arr.fragments[key].projection.linear
            if arr.ambient_dim == 1:
                stretch = linear[0][0]
                _merge(factors, 0, 1 / stretch, 1 / stretch)
                _merge(factors, 1, stretch, stretch)
                continue
            det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0]
            low, high = singular_squares(linear)
            _merge(factors, 0, 1 / det, 1 / det)
            _merge(factors, 1, low / det, high / det)
            _merge(factors, 2, det, det)
        return factors

    def _band_factors(self, piece: MultiIndex) -> Factors:
        """Exact inf and sup of the band densities W_0 and W_1 over the edge chart."""
        arr = self.cfg.arrangement
        tents = []
        for key in arr.parts(piece):
            fragment = arr.fragments[key]
            images = sorted(fragment.projection(v)[0] for v in fragment.cell.vertices)
            gradient = fragment.projection.linear[0]
            peak = 2 * fragment.measure / (images[2] - images[0])
            tents.append((images, peak, dot(gradient, gradient)))
        breaks = sorted({t for images, _, _ in tents for t in images})
        factors: Factors = {}
        for q in (0, 1):
            ends = []
            # W_q is affine between breaks; extrapolate from two inner points to both ends
            for lo, hi in zip(breaks, breaks[1:]):
                step = (hi - lo) / 3
                first, second = _density(tents, q, lo + step), _density(tents, q, lo + 2 * step)
                ends += [2 * first - second, 2 * second - first]
            factors[q] = (min(ends), max(ends))
        return factors

    def piece_constants(self) -> Dict[MultiIndex, Tuple[object, object]]:
        """(C², c²) per piece, already divided by C² in weighted mode."""
        table = {}
        for m in self.cfg.geometry.labels:
            factors = self.pullback_factors(m).values()
            upper = max(high for _, high in factors)
            lower = min(low for low, _ in factors)
            if self.cfg.weighted_mode:
                upper, lower = QQ(1), lower / upper
            table[m] = (upper, lower)
        return table

    def simplicial_weights(self) -> Optional[Dict[MultiIndex, object]]:
        if not self.cfg.weighted_mode:
            return None
        return {
            m: max(high for _, high in self.pullback_factors(m).values())
            for m in self.cfg.geometry.labels
        }

    def constants(self) -> Tuple[object, object, Dict[MultiIndex, Tuple[object, object]]]:
        table = self.piece_constants()
        index_set = self.cfg.geometry.index_set
        widest = max(len(index_set.containing(i)) for i in index_set.all)
        c1_squared = (widest + 1) ** 2 * max(upper for upper, _ in table.values())
        c2_squared = max(1 / lower for _, lower in table.values())
        return QQ(c1_squared), QQ(c2_squared), table

    def ratio(self, element) -> Optional[object]:
        weights = self.simplicial_weights()
        simplicial = sum(
            (graph_norm_simplicial(form, i, self.cfg.geometry, weights) for i, form in element.components.items()),
            QQ(0),
        )
        if simplicial == 0:
            return None
        image = xi_apply(element, self.cfg)
        cech = sum(
            (graph_norm_cech(b, i, self.cfg.arrangement) for i, b in image.components.items()),
            QQ(0),
        )
        return cech / simplicial

    def estimate(self) -> BoundEstimate:
        c1_squared, c2_squared, table = self.constants()
        result = BoundEstimate(c1_squared, c2_squared, table, weighted=self.cfg.weighted_mode)
        s = self.cfg.simplicial
        bigrades = [b for b in s.bigrades() if len(s.basis[b])]
        rng = np.random.default_rng(self.seed)
        k = self.value_range
        for sample in range(self.samples):
            bigrade = bigrades[sample % len(bigrades)]
            draws = rng.integers(-k, k + 1, size=len(s.basis[bigrade]))
            element = s.element(bigrade, [QQ(int(v), k) for v in draws])
            ratio = self.ratio(element)
            if ratio is None:
                result.skipped += 1
                continue
            result.sample_ratios.append(ratio)
        self.logger.info(
            "Bounds for %r: C1²=%s, C2²=%s, %d samples (%d skipped), %d violations",
            self.cfg.geometry.name, c1_squared, c2_squared,
            len(result.sample_ratios), result.skipped, len(result.violations()),
        )
        return result


def bound_constants(cfg: XiConfig, samples: int = 0, seed: int = 0,
                    value_range: int = DEFAULT_RANGE) -> BoundEstimate:
    return BoundEstimator(cfg, samples, seed, value_range).estimate()
