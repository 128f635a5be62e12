"""Shared input checks.

Every public entry point funnels its array and scalar arguments through
these helpers so that bad input fails early with a message that names
the offending argument.
"""

from __future__ import annotations

import numpy as np


def as_pairs(data, name: str = "data") -> np.ndarray:
    """Coerce ``data`` to a float (n, 2) array of finite bivariate pairs.

    Accepts anything numpy can turn into a two-column array, including
    objects exposing a ``pairs`` attribute (e.g. a BivariateSample).
    """
    pairs = getattr(data, "pairs", data)
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must be an (n, 2) array, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError(f"{name} needs at least 2 rows, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_vector(values, name: str = "values") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_k(k, n: int, smallest: int = 1, name: str = "k") -> int:
    """Validate an order-statistic count against the sample size."""
    if not isinstance(k, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {k!r}")
    k = int(k)
    if not smallest <= k <= n - 1:
        raise ValueError(f"{name} must satisfy {smallest} <= k <= n-1 = {n - 1}, got {k}")
    return k


def check_alpha(alpha, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError(f"{name} must be a finite value >= 0, got {alpha}")
    return alpha


def check_positive(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {value}")
    return value
