"""Input validation helpers shared across estimators and functions."""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateRegressionError, InsufficientDataError


def as_float_matrix(x, name: str = "x", min_rows: int = 1, min_cols: int = 1) -> np.ndarray:
    """Coerce to a 2-D float64 array with finite entries."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_rows:
        raise InsufficientDataError(
            f"{name} needs at least {min_rows} rows, got {arr.shape[0]}"
        )
    if arr.shape[1] < min_cols:
        raise ValueError(f"{name} needs at least {min_cols} columns, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_float_vector(x, name: str = "x", min_len: int = 1) -> np.ndarray:
    """Coerce to a 1-D float64 array with finite entries."""
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < min_len:
        raise InsufficientDataError(f"{name} needs at least {min_len} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_square(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def lstsq_full_rank(X: np.ndarray, Y: np.ndarray, context: str = "regression") -> np.ndarray:
    """Least squares with an explicit rank check.

    Raises DegenerateRegressionError when the design matrix is rank
    deficient instead of silently returning a minimum-norm solution.
    """
    coef, _, rank, _ = np.linalg.lstsq(X, Y, rcond=None)
    if rank < X.shape[1]:
        raise DegenerateRegressionError(
            f"{context}: design matrix has rank {rank} < {X.shape[1]} columns"
        )
    return coef
