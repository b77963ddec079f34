"""The per-coordinate zero-sum game behind the randomized bi-greedy.

ALG plays a point (g, h) on the curve, ADV plays (g*, h*); ALG's utility is

    1/2 g + 1/2 h - max(g* - g, h* - h).

Against a two-point mixed strategy the set of ADV points with non-negative
expected utility is a pentagon. These helpers compute it and check that a
strategy's pentagon covers a sampled curve.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import Curve, MixedStrategy

REGION_TOL = 1e-9


def game_utility(g_hat, h_hat, g_star, h_star):
    """ALG's utility; broadcasts over numpy arrays."""
    return 0.5 * g_hat + 0.5 * h_hat - np.maximum(g_star - g_hat, h_star - h_hat)


@dataclass(frozen=True)
class Pentagon:
    M0: tuple
    M1: tuple
    M2: tuple
    Q1: tuple
    Q2: tuple

    @property
    def vertices(self) -> np.ndarray:
        """Counter-clockwise order M0, M2, Q2, Q1, M1."""
        return np.array([self.M0, self.M2, self.Q2, self.Q1, self.M1], dtype=np.float64)


def positive_region(P1, P2, lam: float) -> Pentagon:
    """ADV's positive region against playing P1 w.p. ``lam`` and P2 otherwise.

    The points are reordered (and ``lam`` complemented) if needed so that
    ``h1 - g1 >= h2 - g2``.
    """
    (g1, h1), (g2, h2) = (float(P1[0]), float(P1[1])), (float(P2[0]), float(P2[1]))
    if h1 - g1 < h2 - g2:
        (g1, h1), (g2, h2), lam = (g2, h2), (g1, h1), 1.0 - lam
    top = lam * (1.5 * h1 + 0.5 * g1) + (1 - lam) * (1.5 * h2 + 0.5 * g2)
    right = lam * (1.5 * g1 + 0.5 * h1) + (1 - lam) * (1.5 * g2 + 0.5 * h2)
    # slope-1 line through P1 meets h' = top; through P2 meets g' = right
    Q1 = (g1 + (top - h1), top)
    Q2 = (right, h2 + (right - g2))
    return Pentagon((-1.0, -1.0), (-1.0, top), (right, -1.0), Q1, Q2)


def strategy_region(strategy: MixedStrategy) -> Pentagon:
    pts = [p[1:] for p in strategy.points]
    if strategy.is_deterministic:
        return positive_region(pts[0], pts[0], 1.0)
    return positive_region(pts[0], pts[1], strategy.lam)


def expected_utility(strategy: MixedStrategy, g_star, h_star):
    total = 0.0
    for w, (_, g, h) in zip(strategy.weights, strategy.points):
        total = total + w * game_utility(g, h, g_star, h_star)
    return total


def expected_utility_min(strategy: MixedStrategy, curve: Curve) -> float:
    """Worst expected utility over ADV strategies restricted to the samples."""
    return float(np.min(expected_utility(strategy, curve.g, curve.h)))


def point_in_region(pentagon: Pentagon, p, tol: float = REGION_TOL) -> bool:
    g, h = float(p[0]), float(p[1])
    if g < -1.0 - tol or h < -1.0 - tol:
        return False
    if h > pentagon.M1[1] + tol or g > pentagon.M2[0] + tol:
        return False
    (qg1, qh1), (qg2, qh2) = pentagon.Q1, pentagon.Q2
    dg, dh = qg2 - qg1, qh2 - qh1
    length = np.hypot(dg, dh)
    if length <= tol:
        return True
    # M0 lies inside, so p must be on the same side of the Q1-Q2 edge.
    side = (dg * (h - qh1) - dh * (g - qg1)) / length
    inside = (dg * (-1.0 - qh1) - dh * (-1.0 - qg1)) / length
    return bool(side * np.sign(inside) >= -tol)


def curve_covered(strategy: MixedStrategy, curve: Curve, tol: float = REGION_TOL) -> bool:
    region = strategy_region(strategy)
    return all(point_in_region(region, p, tol) for p in curve.points)
