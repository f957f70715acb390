"""Input validation helpers shared by the public API."""

import numbers

import numpy as np


class InfeasibleSampleError(ValueError):
    """Observations cannot come from U[theta(1-k), theta(1+k)] for any theta."""


def check_k(k):
    if isinstance(k, bool) or not isinstance(k, numbers.Real):
        raise TypeError(f"k must be a real number, got {type(k).__name__}")
    k = float(k)
    if not 0.0 < k < 1.0:
        raise ValueError(f"k must lie strictly inside (0, 1), got {k!r}")
    return k


def check_n(n):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"n must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return int(n)


def check_positive(value, name):
    value = float(value)
    if not (np.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")
    return value


def check_probability(p, name="p", *, open_interval=False):
    p = np.asarray(p, dtype=float)
    if open_interval:
        bad = ~((p > 0.0) & (p < 1.0))
    else:
        bad = ~((p >= 0.0) & (p <= 1.0))
    if np.any(bad):
        bounds = "(0, 1)" if open_interval else "[0, 1]"
        raise ValueError(f"{name} must lie in {bounds}, got {p!r}")
    return p


def check_observations(values):
    """Return a read-only 1-D float array of strictly positive finite values."""
    arr = np.array(values, dtype=float)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D array of observations, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("at least one observation is required")
    if not np.all(np.isfinite(arr)):
        raise ValueError("observations must be finite")
    if np.any(arr <= 0.0):
        raise ValueError("observations must be strictly positive")
    arr.setflags(write=False)
    return arr
