"""Scikit-learn style wrappers so the modulators compose with pipelines."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import (
    check_dc_current,
    check_operating_points,
    check_phase_array,
    check_positive,
)
from ..refgen import PhaseTriple, locate_sector
from .carrier import carrier_ontimes
from .ontimes import (
    Scheme,
    dwell_times_from_currents,
    dwell_times_trig,
    ontimes_from_dwell,
    svm_location,
)
from .timeline import assemble_timeline


class CarrierModulator(TransformerMixin, BaseEstimator):
    """Carrier-based on-time generator for the two symmetric patterns.

    ``transform`` maps rows of reference currents ``(I_A, I_B, I_C)`` to
    per-phase gate on-times in seconds, or duty ratios when
    ``output="duty"``.

    Parameters
    ----------
    pattern : {"pattern1", "pattern2"}
        ``pattern1`` clamps the smallest phase, ``pattern2`` clamps nothing.
    f_sw : float
        Switching frequency in hertz.
    i_dc : float
        DC-link current in amperes.
    output : {"ontimes", "duty"}
    """

    def __init__(self, pattern="pattern1", f_sw=18000.0, i_dc=5.0, output="ontimes"):
        self.pattern = pattern
        self.f_sw = f_sw
        self.i_dc = i_dc
        self.output = output

    def fit(self, X, y=None):
        check_phase_array(X)
        scheme = Scheme.coerce(self.pattern)
        if scheme is Scheme.SVM:
            raise ValueError("use SpaceVectorModulator for the trigonometric baseline")
        if self.output not in ("ontimes", "duty"):
            raise ValueError(f"output must be 'ontimes' or 'duty', got {self.output!r}")
        self.scheme_ = scheme
        self.ts_ = 1.0 / check_positive(self.f_sw, "f_sw")
        self.i_dc_ = check_dc_current(self.i_dc)
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "scheme_")
        X = check_phase_array(X)
        out = np.empty_like(X)
        for k, row in enumerate(X):
            on = carrier_ontimes(self.scheme_, PhaseTriple(*row), self.ts_, self.i_dc_)
            out[k] = on[:3]
        if self.output == "duty":
            out /= self.ts_
        return out

    def timelines(self, X):
        """Analytic switching timelines for each row of references."""
        check_is_fitted(self, "scheme_")
        X = check_phase_array(X)
        out = []
        for row in X:
            refs = PhaseTriple(*row)
            loc = locate_sector(refs)
            dt = dwell_times_from_currents(refs, loc, self.ts_, self.i_dc_)
            out.append(assemble_timeline(self.scheme_, loc, dt))
        return out


class SpaceVectorModulator(TransformerMixin, BaseEstimator):
    """Conventional trigonometric space-vector modulator.

    ``transform`` maps operating points ``(theta, m)`` to per-phase gate
    on-times using the clamping state sequence.
    """

    def __init__(self, f_sw=18000.0, output="ontimes"):
        self.f_sw = f_sw
        self.output = output

    def fit(self, X, y=None):
        check_operating_points(X)
        if self.output not in ("ontimes", "duty"):
            raise ValueError(f"output must be 'ontimes' or 'duty', got {self.output!r}")
        self.ts_ = 1.0 / check_positive(self.f_sw, "f_sw")
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "ts_")
        X = check_operating_points(X)
        out = np.empty((X.shape[0], 3))
        for k, (theta, m) in enumerate(X):
            loc = svm_location(theta)
            dt = dwell_times_trig(loc.theta_local, m, self.ts_)
            out[k] = ontimes_from_dwell(Scheme.SVM, loc, dt)[:3]
        if self.output == "duty":
            out /= self.ts_
        return out

    def timelines(self, X):
        check_is_fitted(self, "ts_")
        X = check_operating_points(X)
        out = []
        for theta, m in X:
            loc = svm_location(theta)
            out.append(assemble_timeline(Scheme.SVM, loc, dwell_times_trig(loc.theta_local, m, self.ts_)))
        return out
