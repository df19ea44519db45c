"""Input validation helpers shared by the public functions and estimators."""

import math

import numpy as np
from sklearn.utils import check_array

from .exceptions import InvalidDCCurrentError, OvermodulationError


def check_modulation_index(m):
    m = float(m)
    if not (0.0 <= m <= 1.0) or math.isnan(m):
        raise OvermodulationError(f"modulation index must lie in [0, 1], got {m!r}")
    return m


def check_dc_current(i_dc):
    i_dc = float(i_dc)
    if not i_dc > 0.0:
        raise InvalidDCCurrentError(f"DC-link current must be positive, got {i_dc!r}")
    return i_dc


def check_positive(value, name):
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_phase_array(X):
    """Validate an (n_samples, 3) array of per-phase quantities."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 3:
        raise ValueError(f"expected 3 columns (phases A, B, C), got {X.shape[1]}")
    return X


def check_operating_points(X):
    """Validate an (n_samples, 2) array of (theta, m) operating points."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns (theta, m), got {X.shape[1]}")
    m = X[:, 1]
    if np.any(m < 0.0) or np.any(m > 1.0):
        raise OvermodulationError("modulation index column must lie in [0, 1]")
    return X
