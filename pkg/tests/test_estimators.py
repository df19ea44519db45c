import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from tptspwm.modulator import CarrierModulator, Scheme, SpaceVectorModulator, plan_period
from tptspwm.refgen import ReferenceGenerator

POINTS = np.array([[math.radians(d), m] for d in range(-30, 330, 17) for m in (0.2, 0.5, 0.95)])


def test_get_params_and_clone():
    est = CarrierModulator(pattern="pattern2", f_sw=20000.0, i_dc=4.0, output="duty")
    params = est.get_params()
    assert params == {"pattern": "pattern2", "f_sw": 20000.0, "i_dc": 4.0, "output": "duty"}
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(pattern="pattern1")
    assert est.pattern == "pattern1"


def test_transform_before_fit():
    with pytest.raises(NotFittedError):
        CarrierModulator().transform(np.zeros((1, 3)))


def test_pipeline_matches_timelines():
    pipe = make_pipeline(ReferenceGenerator(i_dc=5.0), CarrierModulator(pattern="pattern1", i_dc=5.0))
    on = pipe.fit_transform(POINTS)
    ts = 1.0 / 18000.0
    for row, (theta, m) in zip(on, POINTS):
        _, _, tl = plan_period(Scheme.PATTERN_I, theta, m, 5.0, ts)
        assert row == pytest.approx(tuple(tl.gate_on_times()), abs=1e-15)


def test_duty_output_in_unit_interval():
    refs = ReferenceGenerator().fit_transform(POINTS)
    duty = CarrierModulator(pattern="pattern2", output="duty").fit_transform(refs)
    assert duty.min() >= 0.0 and duty.max() <= 1.0


def test_carrier_rejects_svm_and_bad_shapes():
    with pytest.raises(ValueError):
        CarrierModulator(pattern="svm").fit(np.zeros((1, 3)))
    with pytest.raises(ValueError):
        CarrierModulator().fit(np.zeros((2, 2)))


def test_svm_estimator_agrees_with_pattern1():
    refs = ReferenceGenerator().fit_transform(POINTS)
    carrier = CarrierModulator(pattern="pattern1", output="duty").fit_transform(refs)
    svm = SpaceVectorModulator(output="duty").fit_transform(POINTS)
    assert svm == pytest.approx(carrier, abs=1e-9)


def test_estimator_timelines():
    refs = ReferenceGenerator().fit_transform(POINTS[:5])
    tls = CarrierModulator(pattern="pattern2").fit(refs).timelines(refs)
    assert len(tls) == 5 and all(tl.is_palindrome() for tl in tls)
    tls = SpaceVectorModulator().fit(POINTS[:5]).timelines(POINTS[:5])
    assert all(tl.is_palindrome() for tl in tls)
