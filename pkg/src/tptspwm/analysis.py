"""Waveform metrics: fundamentals, THD, period averages and switching statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import UndefinedTHDError, WindowError
from .modulator import OpCounters, Scheme, counted_cycle

# fraction of a period below which a window length is treated as exact
WINDOW_TOL = 1e-6


class SpectrumPoint(NamedTuple):
    frequency: float
    amplitude: float
    phase: float


class SwitchingStats(NamedTuple):
    clamp_fraction: tuple
    transitions_per_period: tuple


def _periods_in_window(n_samples, sample_rate, f1):
    cycles = n_samples * f1 / sample_rate
    whole = round(cycles)
    if whole < 1 or abs(cycles - whole) > WINDOW_TOL * max(1.0, cycles):
        raise WindowError(
            f"window of {n_samples} samples spans {cycles:.6f} periods of {f1} Hz, "
            "not a whole number"
        )
    return int(whole)


def fundamental(samples, f1, sample_rate, t0=0.0):
    """Amplitude and phase of the ``f1`` component by single-bin projection.

    The phase refers to ``A cos(2 pi f1 t + phase)`` with ``t0`` the time of
    the first sample.  The window must hold an integer number of periods.
    """
    x = np.asarray(samples, dtype=np.float64)
    _periods_in_window(len(x), sample_rate, f1)
    t = t0 + np.arange(len(x)) / sample_rate
    z = 2.0 * np.mean(x * np.exp(-2j * np.pi * f1 * t))
    return SpectrumPoint(float(f1), float(abs(z)), float(np.angle(z)))


def harmonic_amplitudes(samples, f1, sample_rate, n_harmonics):
    """Amplitudes of harmonics ``1 .. n_harmonics`` of ``f1``."""
    x = np.asarray(samples, dtype=np.float64)
    periods = _periods_in_window(len(x), sample_rate, f1)
    spectrum = np.abs(np.fft.rfft(x)) * (2.0 / len(x))
    bins = periods * np.arange(1, n_harmonics + 1)
    if bins[-1] >= len(spectrum):
        raise ValueError(f"harmonic {n_harmonics} lies above the Nyquist frequency")
    return spectrum[bins]


def thd(samples, f1, sample_rate, n_harmonics=50):
    """Total harmonic distortion over harmonics ``2 .. n_harmonics``.

    Raises
    ------
    UndefinedTHDError
        If the fundamental amplitude is zero.
    """
    if n_harmonics < 2:
        raise ValueError("n_harmonics must be at least 2")
    amps = harmonic_amplitudes(samples, f1, sample_rate, n_harmonics)
    if amps[0] <= 1e-15 * max(1.0, float(np.max(np.abs(samples)))):
        raise UndefinedTHDError("fundamental amplitude is zero")
    return float(math.sqrt(float(np.sum(amps[1:] ** 2))) / amps[0])


def high_frequency_distortion(samples, f1, sample_rate, n_harmonics=50):
    """RMS of everything above harmonic ``n_harmonics`` relative to the fundamental.

    This carries the switching-frequency ripple that the low-frequency THD
    leaves out.
    """
    x = np.asarray(samples, dtype=np.float64)
    periods = _periods_in_window(len(x), sample_rate, f1)
    spectrum = np.fft.rfft(x) * (2.0 / len(x))
    fund = abs(spectrum[periods])
    if fund == 0.0:
        raise UndefinedTHDError("fundamental amplitude is zero")
    upper = np.abs(spectrum[periods * n_harmonics + 1 :])
    if len(x) % 2 == 0:
        upper[-1] /= 2.0
    return float(math.sqrt(float(np.sum(upper**2))) / fund)


def per_period_average(samples, period, sample_rate):
    """Mean of each complete ``period`` of ``samples`` (leading axis is time)."""
    x = np.asarray(samples, dtype=np.float64)
    per = period * sample_rate
    n_per = int(round(per))
    if n_per < 1 or abs(per - n_per) > 1e-6 * per:
        raise WindowError(f"period of {per:.6f} samples is not commensurate with sampling")
    n = len(x) // n_per
    return x[: n * n_per].reshape(n, n_per, *x.shape[1:]).mean(axis=1)


def clamp_and_transition_stats(timelines):
    """Clamp fraction and worst-case transitions per phase over a set of periods.

    A phase counts as clamped in a period when its gate stays high for the
    whole period.  Transitions count both edges inside the period.
    """
    if not timelines:
        raise ValueError("need at least one timeline")
    clamped = [0, 0, 0]
    worst = [0, 0, 0]
    for tl in timelines:
        on = tl.gate_on_times()
        tol = 1e-12 * tl.period
        for j in range(3):
            if on[j] >= tl.period - tol:
                clamped[j] += 1
            worst[j] = max(worst[j], len(tl.edges(j)))
    n = len(timelines)
    return SwitchingStats(tuple(c / n for c in clamped), tuple(worst))


def power_balance(trace, start, stop):
    """Mean input, output, resistive-loss and storage-change power over a window."""
    cfg = trace.config
    c = cfg.circuit
    mask = trace.window(start, stop)
    p_in = np.sum(trace.v_grid[mask] * trace.i_src[mask], axis=1).mean()
    p_out = (trace.v_out[mask] * trace.i_load[mask]).mean()
    p_loss = (c.r_l_in * np.sum(trace.i_src[mask] ** 2, axis=1)).mean()
    idx = np.flatnonzero(mask)

    def energy(k):
        return 0.5 * (
            c.l_in * np.sum(trace.i_src[k] ** 2)
            + c.c_in * np.sum(trace.v_cap[k] ** 2)
            + c.l_out * trace.i_dc[k] ** 2
            + c.c_out * trace.v_out[k] ** 2
        )

    span = len(idx) * trace.sample_period
    # one sample past the window closes the interval when available
    last = idx[-1] + 1 if idx[-1] + 1 < len(trace) else idx[-1]
    p_store = (energy(last) - energy(idx[0])) / span
    return {"input": float(p_in), "output": float(p_out), "loss": float(p_loss), "storage": float(p_store)}


def resource_report(counters):
    """Per-scheme operation counts as rows of plain dicts, checked for sanity.

    ``counters`` maps scheme names to :class:`OpCounters`.  Carrier schemes
    must use neither trigonometric functions nor lookup tables.
    """
    rows = {}
    for scheme, cnt in counters.items():
        scheme = Scheme.coerce(scheme)
        if scheme is not Scheme.SVM and (cnt.trig_evals or cnt.lookups):
            raise AssertionError(f"{scheme.value} should not need trig or lookup tables")
        rows[scheme.value] = cnt.as_dict()
    return rows


def format_resource_table(rows):
    fields = list(OpCounters().as_dict())
    names = list(rows)
    width = max(len(f) for f in fields) + 2
    lines = ["operation".ljust(width) + "".join(n.rjust(10) for n in names)]
    for f in fields:
        lines.append(f.ljust(width) + "".join(str(rows[n][f]).rjust(10) for n in names))
    return "\n".join(lines)


@dataclass
class MetricsReport:
    fundamental: dict
    thd: dict
    switching_distortion: dict
    tracking_error_rms: float
    clamp_fraction: tuple
    transitions_per_period: tuple
    op_counters: dict = field(default_factory=dict)
    mean_i_dc: float = float("nan")
    mean_v_out: float = float("nan")
    reference: SpectrumPoint = None

    def to_text(self):
        lines = ["[fundamental]"]
        for ch, sp in self.fundamental.items():
            lines.append(
                f"{ch} = {sp.amplitude:.6g} A @ {math.degrees(sp.phase):+.4f} deg ({sp.frequency:g} Hz)"
            )
        if self.reference is not None:
            lines.append(
                f"reference = {self.reference.amplitude:.6g} A @ "
                f"{math.degrees(self.reference.phase):+.4f} deg"
            )
        lines.append("[thd]")
        for ch, v in self.thd.items():
            lines.append(f"{ch} = {v:.6g}")
        lines.append("[switching_distortion]")
        for ch, v in self.switching_distortion.items():
            lines.append(f"{ch} = {v:.6g}")
        lines.append("[tracking]")
        lines.append(f"tracking_error_rms = {self.tracking_error_rms:.6g}")
        lines.append(f"mean_i_dc = {self.mean_i_dc:.6g}")
        lines.append(f"mean_v_out = {self.mean_v_out:.6g}")
        lines.append("[switching]")
        lines.append("clamp_fraction = " + ", ".join(f"{c:.6f}" for c in self.clamp_fraction))
        lines.append(
            "transitions_per_period = " + ", ".join(str(n) for n in self.transitions_per_period)
        )
        if self.op_counters:
            lines.append("[resources]")
            lines.append(format_resource_table(self.op_counters))
        return "\n".join(lines) + "\n"


def steady_window(trace, skip_periods=1):
    """Start and stop times covering whole fundamental periods after ``skip_periods``."""
    f1 = trace.config.grid.f_grid
    total = len(trace) * trace.sample_period
    whole = int(math.floor(total * f1 + 1e-9))
    if whole - skip_periods < 1:
        raise WindowError(
            f"run of {total:.6g} s leaves no whole fundamental period after skipping {skip_periods}"
        )
    return skip_periods / f1, whole / f1


def analyze_trace(trace, skip_periods=1, n_harmonics=50):
    """Metrics for a simulated run over whole fundamental periods after start-up."""
    cfg = trace.config
    f1 = cfg.grid.f_grid
    start, stop = steady_window(trace, skip_periods)
    mask = trace.window(start, stop)
    fs = trace.sample_rate
    t0 = float(trace.t[mask][0])
    fund, dist, hf = {}, {}, {}
    for j, ph in enumerate("abc"):
        for name, data in (("i_src", trace.i_src), ("i_rect", trace.i_rect)):
            ch = f"{name}_{ph}"
            x = data[mask, j]
            fund[ch] = fundamental(x, f1, fs, t0)
            try:
                dist[ch] = thd(x, f1, fs, n_harmonics)
                hf[ch] = high_frequency_distortion(x, f1, fs, n_harmonics)
            except UndefinedTHDError:
                dist[ch] = float("nan")
                hf[ch] = float("nan")
    ref = fundamental(trace.i_ref[mask, 0], f1, fs, t0)
    samples_per_period = cfg.steps_per_period / cfg.sample_every
    if samples_per_period == int(samples_per_period):
        avg = per_period_average(trace.i_rect[mask], cfg.ts, fs)
        ref_avg = per_period_average(trace.i_ref[mask], cfg.ts, fs)
        # the period average follows i_dc, so compare with its own scaling
        idc_avg = per_period_average(trace.i_dc[mask], cfg.ts, fs)
        scaled = ref_avg * (idc_avg / cfg.load_current)[:, None]
        tracking = float(np.sqrt(np.mean((avg - scaled) ** 2)))
    else:
        tracking = float("nan")
    n_periods = int(round(cfg.f_sw / f1))
    stats = clamp_and_transition_stats(trace.timelines[-n_periods:])
    counters = {cfg.scheme: counted_cycle(cfg.scheme, cfg.grid.phase_offset, cfg.m)[1]}
    return MetricsReport(
        fundamental=fund,
        thd=dist,
        switching_distortion=hf,
        tracking_error_rms=tracking,
        clamp_fraction=stats.clamp_fraction,
        transitions_per_period=stats.transitions_per_period,
        op_counters=resource_report(counters),
        mean_i_dc=float(trace.i_dc[mask].mean()),
        mean_v_out=float(trace.v_out[mask].mean()),
        reference=ref,
    )
