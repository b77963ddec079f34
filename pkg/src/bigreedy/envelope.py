"""Planar curve r(z) = (g(z), h(z)), its upper concave envelope, and the
two-point mixed strategy read off where the envelope meets the diagonal
line h' - beta = g' - alpha.

g is the abscissa and h the ordinate throughout.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import NonFiniteValueError, SingleCrossingError

GEOM_TOL = 1e-9
_GRID_SLACK = 1e-9


def grid(lo: float, hi: float, epsilon: float) -> np.ndarray:
    """lo, lo + eps, lo + 2 eps, ... strictly below hi, then hi itself."""
    if not hi > lo:
        raise ValueError(f"need lo < hi, got lo={lo!r}, hi={hi!r}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    steps = max(1, math.ceil((hi - lo) / epsilon - _GRID_SLACK))
    zs = lo + epsilon * np.arange(steps + 1, dtype=np.float64)
    zs[-1] = hi
    return zs


@dataclass(frozen=True)
class Curve:
    """Samples of r(z), strictly increasing in z."""

    z: np.ndarray
    g: np.ndarray
    h: np.ndarray

    def __len__(self):
        return self.z.shape[0]

    @property
    def alpha(self) -> float:
        return float(self.g[-1])

    @property
    def beta(self) -> float:
        return float(self.h[0])

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.g, self.h])


def _evaluate(func, zs, vectorized):
    if vectorized:
        vals = np.asarray(func(zs), dtype=np.float64)
        if vals.shape != zs.shape:
            raise ValueError("vectorized curve function returned the wrong shape")
    else:
        vals = np.array([float(func(z)) for z in zs])
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = bad[0]
        raise NonFiniteValueError(float(zs[k]), float(vals[k]))
    return vals


def sample_curve(g, h, Z_l: float, Z_u: float, epsilon: float, *,
                 vectorized: bool = False) -> Curve:
    """Sample ``(g(z), h(z))`` at ``Z_l, Z_l + eps, ...`` and ``Z_u``.

    With ``vectorized=True`` the functions receive the whole grid as one
    array, otherwise they are called once per scalar z.
    """
    zs = grid(float(Z_l), float(Z_u), float(epsilon))
    return Curve(zs, _evaluate(g, zs, vectorized), _evaluate(h, zs, vectorized))


@dataclass(frozen=True)
class Envelope:
    """Hull vertices (g, h), their z annotations and sample indices."""

    vertices: np.ndarray
    annotations: np.ndarray
    indices: np.ndarray
    alpha: float
    beta: float

    def __len__(self):
        return self.vertices.shape[0]

    @property
    def scale(self) -> float:
        return max(1.0, self.alpha, self.beta)

    def height(self, g) -> np.ndarray:
        """Piecewise-linear envelope height at abscissa ``g``."""
        return np.interp(g, self.vertices[:, 0], self.vertices[:, 1])


def _height_above(a, t, b) -> float:
    """Signed perpendicular distance of ``t`` above the line from ``a`` to ``b``."""
    dg, dh = b[0] - a[0], b[1] - a[1]
    cross = dg * (t[1] - a[1]) - dh * (t[0] - a[0])
    return cross / math.hypot(dg, dh)


def upper_concave_envelope(curve: Curve, tol: float = GEOM_TOL) -> Envelope:
    """Annotated upper concave envelope by a single monotone stack pass.

    A sample is admitted only if its g strictly exceeds the g on top of the
    stack, so ties keep the earlier sample. While the stack holds two or more
    vertices and the top one is not strictly above (by more than ``tol``
    scaled by max(1, alpha, beta)) the chord from the one below it to the new
    sample, the top is popped. Runs in time linear in the sample count.
    """
    n = len(curve)
    if n < 2:
        raise ValueError("an envelope needs at least 2 samples")
    thresh = tol * max(1.0, curve.alpha, curve.beta)
    g, h = curve.g, curve.h
    stack: list[int] = []
    for k in range(n):
        if stack and not g[k] > g[stack[-1]]:
            continue
        p = (g[k], h[k])
        while len(stack) >= 2:
            a, t = stack[-2], stack[-1]
            if _height_above((g[a], h[a]), (g[t], h[t]), p) > thresh:
                break
            stack.pop()
        stack.append(k)
    idx = np.asarray(stack, dtype=np.intp)
    return Envelope(
        vertices=np.column_stack([g[idx], h[idx]]),
        annotations=curve.z[idx].copy(),
        indices=idx,
        alpha=curve.alpha,
        beta=curve.beta,
    )


@dataclass(frozen=True)
class MixedStrategy:
    """A one- or two-point distribution over z values.

    ``points`` holds ``(z, g, h)`` triples; the first is played with
    probability ``lam``. For two points ``h1 - g1 >= h2 - g2``.
    """

    points: tuple
    lam: float

    @property
    def is_deterministic(self) -> bool:
        return len(self.points) == 1

    @property
    def z1(self) -> float:
        return self.points[0][0]

    @property
    def z2(self) -> float:
        return self.points[-1][0]

    @property
    def weights(self) -> tuple:
        return (1.0,) if self.is_deterministic else (self.lam, 1.0 - self.lam)

    @property
    def expected_point(self) -> np.ndarray:
        """lam P1 + (1 - lam) P2 in the (g, h) plane."""
        return sum(w * np.array(p[1:]) for w, p in zip(self.weights, self.points))

    def draw(self, rng) -> float:
        """Sample a z; consumes one uniform only for two-point strategies."""
        if self.is_deterministic:
            return float(self.points[0][0])
        return float(self.z1 if rng.random() < self.lam else self.z2)


def _vertex(env: Envelope, k: int) -> tuple:
    return (float(env.annotations[k]), float(env.vertices[k, 0]), float(env.vertices[k, 1]))


def intersect_diagonal(env: Envelope, tol: float = GEOM_TOL) -> MixedStrategy:
    """Split the envelope point on h' - g' = beta - alpha into two vertices.

    Degenerate cases return a deterministic strategy: alpha = 0 plays the
    first vertex, beta = 0 the last, and a vertex within ``tol`` of the line
    is played directly.
    """
    if env.alpha <= 0.0:
        return MixedStrategy((_vertex(env, 0),), 1.0)
    if env.beta <= 0.0:
        return MixedStrategy((_vertex(env, len(env) - 1),), 1.0)
    thresh = tol * env.scale
    # Offset from the diagonal; non-increasing along the envelope for weak-DR curves.
    d = env.vertices[:, 1] - env.vertices[:, 0] - (env.beta - env.alpha)
    for k in range(len(env)):
        if abs(d[k]) <= thresh:
            return MixedStrategy((_vertex(env, k),), 1.0)
        if d[k] < 0.0:
            if k == 0 or d[k - 1] <= 0.0:
                break
            lam = float(-d[k] / (d[k - 1] - d[k]))
            return MixedStrategy((_vertex(env, k - 1), _vertex(env, k)), lam)
    raise SingleCrossingError(
        "single-crossing violated: no envelope edge straddles h' - g' = beta - alpha"
    )


def debug_dump(curve: Curve, env: Envelope, strategy: MixedStrategy, path=None) -> dict:
    """JSON-ready record of one curve, its envelope and the chosen strategy."""
    payload = {
        "samples": {"z": curve.z.tolist(), "g": curve.g.tolist(), "h": curve.h.tolist()},
        "envelope": {
            "vertices": env.vertices.tolist(),
            "z": env.annotations.tolist(),
            "alpha": env.alpha,
            "beta": env.beta,
        },
        "strategy": {"points": [list(p) for p in strategy.points], "lambda": strategy.lam},
    }
    if path is not None:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")
    return payload
