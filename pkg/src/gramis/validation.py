"""Small input-validation helpers used by the public API."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import DimensionMismatch, InvalidParameter


def as_vector(x: ArrayLike, dim: int | None = None, name: str = "x") -> NDArray[np.float64]:
    """Coerce to a 1-d float array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InvalidParameter(f"{name} must be 1-d, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"{name} has dimension {v.shape[0]}, expected {dim}")
    return v


def as_square_matrix(m: ArrayLike, dim: int | None = None, name: str = "m") -> NDArray[np.float64]:
    """Coerce to a square 2-d float array, optionally checking its size."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameter(f"{name} must be a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatch(f"{name} is {a.shape[0]}x{a.shape[0]}, expected {dim}x{dim}")
    return a


def as_batch(x: ArrayLike, dim: int, name: str = "x") -> tuple[NDArray[np.float64], bool]:
    """Coerce a point or batch of points to shape (m, dim).

    Returns the batch and a flag telling whether the input was a single
    point, so callers can mirror the input shape in their output.
    """
    a = np.asarray(x, dtype=float)
    if a.ndim == 1:
        if a.shape[0] != dim:
            raise DimensionMismatch(f"{name} has dimension {a.shape[0]}, expected {dim}")
        return a[None, :], True
    if a.ndim == 2:
        if a.shape[1] != dim:
            raise DimensionMismatch(f"{name} has dimension {a.shape[1]}, expected {dim}")
        return a, False
    raise InvalidParameter(f"{name} must have 1 or 2 axes, got shape {a.shape}")


def require(condition: bool, message: str) -> None:
    """Raise InvalidParameter unless a construction-time constraint holds."""
    if not condition:
        raise InvalidParameter(message)
