"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

import numbers

import numpy as np


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_int_vector(values, name: str, minimum: int | None = None) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D integer vector")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise TypeError(f"{name} must contain integers, got {values!r}")
    arr = arr.astype(np.int64)
    if minimum is not None and np.any(arr < minimum):
        raise ValueError(f"all entries of {name} must be >= {minimum}, got {arr.tolist()}")
    return arr


def check_points(X, dim: int | None = None) -> np.ndarray:
    """Return ``X`` as a float ``(n, d)`` array of torus points."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1) if dim is None or X.shape[0] == dim else X.reshape(-1, 1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array of points, got shape {X.shape}")
    if dim is not None and X.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got {X.shape[1]}")
    if not np.all(np.isfinite(X)):
        raise ValueError("points contain NaN or infinity")
    return X


def check_exponent(p) -> float:
    p = float(p)
    if np.isnan(p) or p < 1:
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {p}")
    return p
