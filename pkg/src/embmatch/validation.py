"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np


def check_even_count(n: int) -> int:
    n = int(n)
    if n <= 0 or n % 2 != 0:
        raise ValueError(f"odd vertex count: perfect matchings need a positive even n, got {n}")
    return n


def check_weight_matrix(weights, n: int | None = None) -> np.ndarray:
    """Validate and normalise a dense symmetric weight matrix.

    Returns a float64 copy with a zeroed diagonal.  Rejects non-square,
    non-symmetric, negative, or non-finite input.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {w.shape}")
    if n is not None and w.shape[0] != n:
        raise ValueError(f"weight matrix is {w.shape[0]}x{w.shape[0]}, expected n={n}")
    if not np.array_equal(w, w.T):
        raise ValueError("weight matrix must be symmetric")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite (sentinel completion uses large finite values)")
    if np.any(w < 0):
        raise ValueError("negative weights are not supported")
    w = w.copy()
    np.fill_diagonal(w, 0.0)
    return w


def check_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2:
        raise ValueError(f"points must be a 2-D array (count x dim), got ndim={p.ndim}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise RuntimeError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
