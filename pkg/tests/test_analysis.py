import math

import numpy as np
import pytest

from tptspwm.analysis import (
    clamp_and_transition_stats,
    format_resource_table,
    fundamental,
    harmonic_amplitudes,
    high_frequency_distortion,
    per_period_average,
    resource_report,
    thd,
)
from tptspwm.exceptions import UndefinedTHDError, WindowError
from tptspwm.modulator import OpCounters, Scheme, conduction_map, counted_cycle, plan_period

from oracles import REFS_MINUS_15, SQUARE_THD_INFINITE, SQUARE_THD_TO_99

# one period of slack, plus rounding at the bound
CLAMP_TOL = (1 / 360) * (1 + 1e-9)
F1 = 50.0
FS = 50.0 * 4000


def tone(amp, k=1, phase=0.0, periods=2, fs=FS):
    t = np.arange(int(round(periods * fs / F1))) / fs
    return amp * np.cos(2 * np.pi * k * F1 * t + phase)


def test_pure_tone():
    sp = fundamental(tone(2.5), F1, FS)
    assert sp.amplitude == pytest.approx(2.5, rel=1e-12)
    assert sp.phase == pytest.approx(0.0, abs=1e-12)
    assert thd(tone(2.5), F1, FS) == pytest.approx(0.0, abs=1e-12)


def test_orthogonal_harmonic_ignored():
    x = tone(2.5) + tone(0.1, k=5)
    assert fundamental(x, F1, FS).amplitude == pytest.approx(2.5, rel=1e-12)
    assert thd(x, F1, FS) == pytest.approx(0.04, rel=1e-10)
    assert harmonic_amplitudes(x, F1, FS, 5)[4] == pytest.approx(0.1, rel=1e-10)


def test_synthesis_round_trip():
    x = tone(1.7, phase=0.4, periods=3)
    sp = fundamental(x, F1, FS, t0=0.0)
    t = np.arange(len(x)) / FS
    rebuilt = sp.amplitude * np.cos(2 * np.pi * F1 * t + sp.phase)
    assert np.abs(rebuilt - x).max() <= 1e-12 * 1.7


def test_phase_reference_time():
    fs = FS
    t0 = 0.0013
    t = t0 + np.arange(int(fs / F1)) / fs
    sp = fundamental(np.cos(2 * np.pi * F1 * t - 0.3), F1, fs, t0=t0)
    assert sp.phase == pytest.approx(-0.3, abs=1e-12)


def test_window_must_be_whole_periods():
    with pytest.raises(WindowError):
        fundamental(tone(1.0)[:-7], F1, FS)
    with pytest.raises(WindowError):
        thd(tone(1.0)[:100], F1, FS)


def test_square_wave_thd():
    n = 20000
    t = (np.arange(n) + 0.5) / n
    x = np.sign(np.cos(2 * np.pi * t))
    got = thd(x, 1.0, n, n_harmonics=99)
    assert got == pytest.approx(SQUARE_THD_TO_99, rel=1e-3)
    assert got == pytest.approx(0.483, rel=0.01)
    assert SQUARE_THD_INFINITE == pytest.approx(0.483, rel=1e-3)


def test_thd_scale_invariance():
    x = tone(1.0) + tone(0.2, k=3, phase=0.7) + tone(0.05, k=11)
    base = thd(x, F1, FS)
    for scale in (1e-6, 3.0, 1e5):
        assert thd(scale * x, F1, FS) == pytest.approx(base, rel=1e-12)


def test_thd_errors():
    with pytest.raises(UndefinedTHDError):
        thd(tone(1.0, k=3), F1, FS)
    with pytest.raises(ValueError):
        thd(tone(1.0), F1, FS, n_harmonics=1)


def test_high_frequency_distortion_sees_ripple():
    x = tone(1.0) + tone(0.1, k=360)
    assert thd(x, F1, FS) == pytest.approx(0.0, abs=1e-12)
    assert high_frequency_distortion(x, F1, FS) == pytest.approx(0.1 / math.sqrt(1.0), rel=1e-9)


def test_per_period_average_simple():
    assert per_period_average(np.full(400, 5.0), 1e-3, 1e5) == pytest.approx([5.0] * 4)
    ripple = np.tile(np.sin(2 * np.pi * np.arange(100) / 100), 3)
    assert per_period_average(ripple, 1e-3, 1e5) == pytest.approx([0.0] * 3, abs=1e-15)
    with pytest.raises(WindowError):
        per_period_average(np.zeros(100), 1.05e-3, 1e4)


def _cell_averaged_currents(tl, loc, i_dc, n):
    """Exact per-sample averages of the switched currents of one timeline."""
    bounds = tl.boundaries()
    charge = np.zeros((len(bounds), 3))
    for k, (state, dur) in enumerate(tl.segments):
        charge[k + 1] = charge[k] + np.array(conduction_map(state, loc, i_dc)) * dur
    edges = np.linspace(0.0, tl.period, n + 1)
    q = np.column_stack([np.interp(edges, bounds, charge[:, j]) for j in range(3)])
    return np.diff(q, axis=0) / (tl.period / n)


def test_per_period_average_of_timeline_currents():
    ts = 1.0 / 18000.0
    refs, loc, tl = plan_period(Scheme.PATTERN_I, math.radians(-15.0), 0.5, 5.0, ts)
    samples = np.vstack([_cell_averaged_currents(tl, loc, 5.0, 200)] * 3)
    avg = per_period_average(samples, ts, 200 / ts)
    for row in avg:
        assert row == pytest.approx(REFS_MINUS_15, abs=1e-6)


def _fundamental_timelines(scheme, m, n=360):
    ts = 1.0 / (F1 * n)
    return [plan_period(scheme, 2 * math.pi * k / n, m, 5.0, ts)[2] for k in range(n)]


def test_clamp_statistics():
    s1 = clamp_and_transition_stats(_fundamental_timelines(Scheme.PATTERN_I, 0.5))
    assert s1.clamp_fraction == pytest.approx((1 / 3,) * 3, abs=CLAMP_TOL)
    s2 = clamp_and_transition_stats(_fundamental_timelines(Scheme.PATTERN_II, 0.5))
    assert s2.clamp_fraction == (0.0, 0.0, 0.0)
    assert max(s1.transitions_per_period + s2.transitions_per_period) <= 2


def test_clamp_statistics_at_zero_modulation():
    tls = _fundamental_timelines(Scheme.PATTERN_I, 0.0)
    stats = clamp_and_transition_stats(tls)
    assert stats.clamp_fraction == pytest.approx((1 / 3,) * 3, abs=CLAMP_TOL)
    assert stats.transitions_per_period == (0, 0, 0)


def test_clamp_arcs_are_two_sixty_degree_spans():
    tls = _fundamental_timelines(Scheme.PATTERN_I, 0.8)
    for j in range(3):
        flags = [tl.gate_on_times()[j] >= tl.period * (1 - 1e-12) for tl in tls]
        rises = sum(1 for k in range(360) if flags[k] and not flags[k - 1])
        assert rises == 2
        assert sum(flags) == pytest.approx(120, abs=1)


def test_resource_report():
    counters = {s.value: counted_cycle(s, 0.3, 0.5)[1] for s in Scheme}
    rows = resource_report(counters)
    assert rows["pattern1"]["trig_evals"] == 0 and rows["pattern1"]["relational_ops"] >= 3
    assert rows["svm"]["trig_evals"] == 2
    assert rows["pattern1"] == rows["pattern2"]
    table = format_resource_table(rows)
    assert "trig_evals" in table and "svm" in table
    with pytest.raises(AssertionError):
        resource_report({"pattern1": OpCounters(trig_evals=1)})
