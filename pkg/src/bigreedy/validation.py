"""Input validation helpers shared by the objectives and the estimators."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import DimensionError, DomainError

BOX_TOL = 1e-12


def check_point(x, n: int, *, copy: bool = False) -> np.ndarray:
    """Return ``x`` as a float64 vector of length ``n`` inside [0, 1]^n.

    Coordinates within ``BOX_TOL`` of the box are clipped onto it.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise DimensionError(f"expected a point of dimension n={n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point has non-finite coordinates")
    if arr.min() < -BOX_TOL or arr.max() > 1.0 + BOX_TOL:
        raise DomainError(
            f"point outside [0,1]^{n}: min={arr.min():.17g}, max={arr.max():.17g}"
        )
    if copy or arr.min() < 0.0 or arr.max() > 1.0:
        arr = np.clip(arr, 0.0, 1.0)
    return arr


def check_points(points, n: int) -> np.ndarray:
    """Batch version of :func:`check_point` for an ``(m, n)`` array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and n == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != n:
        raise DimensionError(f"expected points of dimension n={n}, got shape {arr.shape}")
    if arr.size and (arr.min() < -BOX_TOL or arr.max() > 1.0 + BOX_TOL):
        raise DomainError(f"points outside [0,1]^{n}")
    return np.clip(arr, 0.0, 1.0)


def check_index(i, n: int) -> int:
    if not isinstance(i, numbers.Integral) or not 0 <= i < n:
        raise DimensionError(f"coordinate index must be in [0, {n}), got {i!r}")
    return int(i)


def check_positive(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_square_matrix(M, name: str, n: int | None = None) -> np.ndarray:
    arr = np.array(M, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionError(f"{name} must be {n}x{n}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_objective(obj):
    """Raise ``TypeError`` unless ``obj`` implements the objective protocol."""
    for attr in ("n", "lipschitz", "eval_line", "partial"):
        if not hasattr(obj, attr):
            raise TypeError(f"{type(obj).__name__} is not an objective (missing {attr!r})")
    if not callable(obj):
        raise TypeError(f"{type(obj).__name__} is not callable")
    return obj
