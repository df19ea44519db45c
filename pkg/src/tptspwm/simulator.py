"""Fixed-step switched simulation of the three-switch buck rectifier.

The circuit is a balanced three-wire source feeding a series R-L and shunt
C input filter per phase, three ideal switches with their diode network, a
DC-link inductor with freewheeling diode, an output capacitor and a
constant-current load.  Integration uses classical fourth-order Runge-Kutta
with gate states held constant over each step.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from ._validation import check_modulation_index, check_positive
from .exceptions import SimulationDivergedError
from .modulator import Scheme, conducting_pair, plan_period
from .refgen import GridConfig, PhaseTriple, TWO_PI_3

STATE_SIZE = 8
DIVERGENCE_FACTOR = 10.0


@dataclass(frozen=True)
class CircuitParams:
    """Passive component values; defaults are the 1 kW prototype's."""

    l_in: float = 230e-6
    r_l_in: float = 0.1
    c_in: float = 6.8e-6
    l_out: float = 1e-3
    c_out: float = 150e-6
    r_damp: float = 0.0

    def __post_init__(self):
        for name in ("l_in", "r_l_in", "c_in", "l_out", "c_out"):
            check_positive(getattr(self, name), name)
        if not self.r_damp >= 0.0:
            raise ValueError(f"r_damp must be non-negative, got {self.r_damp!r}")


@dataclass(frozen=True)
class SimConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    circuit: CircuitParams = field(default_factory=CircuitParams)
    f_sw: float = 18000.0
    m: float = 0.5
    load_current: float = 5.0
    duration: float = 0.06
    steps_per_period: int = 200
    scheme: str = "pattern1"
    displacement: float = 0.0
    sample_every: int = 1
    edge_mode: str = "exact"
    load_min_voltage: float = 1.0

    def __post_init__(self):
        check_positive(self.f_sw, "f_sw")
        check_modulation_index(self.m)
        check_positive(self.load_current, "load_current")
        check_positive(self.duration, "duration")
        if int(self.steps_per_period) != self.steps_per_period or self.steps_per_period < 20:
            raise ValueError("steps_per_period must be an integer >= 20")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ValueError("sample_every must be a positive integer")
        Scheme.coerce(self.scheme)
        if self.edge_mode not in ("exact", "snap"):
            raise ValueError(f"edge_mode must be 'exact' or 'snap', got {self.edge_mode!r}")
        check_positive(self.load_min_voltage, "load_min_voltage")

    @property
    def ts(self):
        return 1.0 / self.f_sw

    @property
    def dt(self):
        return self.ts / self.steps_per_period

    @property
    def n_periods(self):
        return max(1, int(round(self.duration * self.f_sw)))

    def with_overrides(self, **kwargs):
        return replace(self, **kwargs)


class SimState(NamedTuple):
    i_filter: PhaseTriple
    v_cap: PhaseTriple
    i_dc: float
    v_out: float

    def to_vector(self):
        return [*self.i_filter, *self.v_cap, self.i_dc, self.v_out]

    @classmethod
    def from_vector(cls, y):
        return cls(PhaseTriple(y[0], y[1], y[2]), PhaseTriple(y[3], y[4], y[5]), y[6], y[7])


@dataclass
class Trace:
    """Uniformly sampled run history; one row per recorded integration step."""

    t: np.ndarray
    v_grid: np.ndarray
    i_ref: np.ndarray
    gates: np.ndarray
    i_rect: np.ndarray
    i_src: np.ndarray
    v_cap: np.ndarray
    i_dc: np.ndarray
    v_out: np.ndarray
    i_load: np.ndarray
    config: SimConfig
    timelines: list = field(default_factory=list)
    locations: list = field(default_factory=list)

    @property
    def sample_period(self):
        return self.config.dt * self.config.sample_every

    @property
    def sample_rate(self):
        return 1.0 / self.sample_period

    def __len__(self):
        return len(self.t)

    def window(self, start, stop=None):
        """Boolean mask of samples with ``start <= t < stop``."""
        stop = np.inf if stop is None else stop
        eps = 1e-3 * self.sample_period
        return (self.t >= start - eps) & (self.t < stop - eps)


def rectifier_port(state, loc, i_dc, v_cap):
    """Rectifier-side phase currents and DC-link voltage for a switch state.

    Returns
    -------
    i_rect : PhaseTriple
    v_link : float
        Line-line voltage of the conducting pair, zero while freewheeling.
    """
    pair = conducting_pair(state, loc)
    if pair is None:
        return PhaseTriple(0.0, 0.0, 0.0), 0.0
    pos, neg = pair
    out = [0.0, 0.0, 0.0]
    out[pos] = i_dc
    out[neg] = -i_dc
    return PhaseTriple(*out), v_cap[pos] - v_cap[neg]


def _make_rhs(cfg):
    """Right-hand side closure over scalar circuit constants."""
    c = cfg.circuit
    grid = cfg.grid
    inv_l, r, inv_c = 1.0 / c.l_in, c.r_l_in, 1.0 / c.c_in
    inv_lo, inv_co = 1.0 / c.l_out, 1.0 / c.c_out
    r_damp = c.r_damp
    i_load = cfg.load_current
    g_load = i_load / cfg.load_min_voltage
    vpk = grid.v_phase_peak
    w = 2.0 * math.pi * grid.f_grid
    phi0 = grid.phase_offset
    cos = math.cos
    third = 1.0 / 3.0
    cfg_vmin = cfg.load_min_voltage

    def rhs(t, y, pos, neg):
        ia, ib, ic, va, vb, vc, idc, vout = y
        th = w * t + phi0
        ga = vpk * cos(th)
        gb = vpk * cos(th - TWO_PI_3)
        gc = vpk * cos(th + TWO_PI_3)
        ra = rb = rc = 0.0
        if pos >= 0:
            if pos == 0:
                ra = idc
            elif pos == 1:
                rb = idc
            else:
                rc = idc
            if neg == 0:
                ra = -idc
            elif neg == 1:
                rb = -idc
            else:
                rc = -idc
        # node voltage at the rectifier terminals includes the damping drop
        na = va + r_damp * (ia - ra)
        nb = vb + r_damp * (ib - rb)
        nc = vc + r_damp * (ic - rc)
        # floating neutral of the three-wire filter
        vn = ((ga + gb + gc) - (na + nb + nc) - r * (ia + ib + ic)) * third
        dia = (ga - na - r * ia - vn) * inv_l
        dib = (gb - nb - r * ib - vn) * inv_l
        dic = (gc - nc - r * ic - vn) * inv_l
        dva = (ia - ra) * inv_c
        dvb = (ib - rb) * inv_c
        dvc = (ic - rc) * inv_c
        if pos >= 0:
            nodes = (na, nb, nc)
            v_link = nodes[pos] - nodes[neg]
        else:
            v_link = 0.0
        didc = (v_link - vout) * inv_lo
        if idc <= 0.0 and didc < 0.0:
            didc = 0.0
        if vout >= cfg_vmin:
            load = i_load
        elif vout > 0.0:
            load = g_load * vout
        else:
            load = 0.0
        dvout = (idc - load) * inv_co
        return (dia, dib, dic, dva, dvb, dvc, didc, dvout)

    return rhs


def derivative(state, gates, loc, t, cfg):
    """Time derivative of the circuit state for fixed gate signals."""
    pair = conducting_pair(gates, loc)
    pos, neg = pair if pair is not None else (-1, -1)
    d = _make_rhs(cfg)(t, tuple(state.to_vector()), pos, neg)
    return SimState.from_vector(d)


def rk4_step(rhs, t, y, h, pos, neg):
    """One classical fourth-order Runge-Kutta step with the gates held fixed."""
    k1 = rhs(t, y, pos, neg)
    hh = 0.5 * h
    y2 = (y[0] + hh * k1[0], y[1] + hh * k1[1], y[2] + hh * k1[2], y[3] + hh * k1[3],
          y[4] + hh * k1[4], y[5] + hh * k1[5], y[6] + hh * k1[6], y[7] + hh * k1[7])
    k2 = rhs(t + hh, y2, pos, neg)
    y3 = (y[0] + hh * k2[0], y[1] + hh * k2[1], y[2] + hh * k2[2], y[3] + hh * k2[3],
          y[4] + hh * k2[4], y[5] + hh * k2[5], y[6] + hh * k2[6], y[7] + hh * k2[7])
    k3 = rhs(t + hh, y3, pos, neg)
    y4 = (y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2], y[3] + h * k3[3],
          y[4] + h * k3[4], y[5] + h * k3[5], y[6] + h * k3[6], y[7] + h * k3[7])
    k4 = rhs(t + h, y4, pos, neg)
    h6 = h / 6.0
    return tuple(
        y[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(8)
    )


def steady_state_phasors(cfg):
    """Fundamental-frequency filter solution used as the initial condition.

    Returns the phase-A source current phasor, capacitor voltage phasor and the
    rectifier current phasor, with the DC-link current at the load value.
    """
    c = cfg.circuit
    w = 2.0 * math.pi * cfg.grid.f_grid
    v_g = cfg.grid.v_phase_peak
    i_r = cmath.rect(cfg.m * cfg.load_current, -cfg.displacement)
    z_l = c.r_l_in + 1j * w * c.l_in
    y_c = 1j * w * c.c_in
    # i_s = i_r + y_c * v_c and v_c = v_g - z_l * i_s
    i_s = (i_r + y_c * v_g) / (1.0 + y_c * z_l)
    v_c = v_g - z_l * i_s
    return i_s, v_c, i_r


def unity_pf_displacement(cfg, iterations=20):
    """Reference lag that puts the grid current in phase with the grid voltage.

    The input capacitors draw a leading current, so references aligned with
    the grid leave the source current leading.  Delaying the references by
    the returned angle (use it as ``displacement``) cancels that lead at the
    fundamental.
    """
    if cfg.m == 0.0:
        return 0.0
    phi = 0.0
    for _ in range(iterations):
        i_s, _, _ = steady_state_phasors(cfg.with_overrides(displacement=phi))
        step = cmath.phase(i_s)
        phi += step
        if abs(step) < 1e-15:
            break
    return phi


def expected_dc_voltage(cfg):
    """Mean DC-link voltage implied by power balance at the fundamental."""
    _, v_c, i_r = steady_state_phasors(cfg)
    if cfg.m == 0.0:
        return 0.0
    return 1.5 * (v_c * i_r.conjugate()).real / cfg.load_current


def initial_state(cfg):
    i_s, v_c, _ = steady_state_phasors(cfg)
    th = cfg.grid.phase_offset
    shifts = (0.0, -TWO_PI_3, TWO_PI_3)
    i_f = PhaseTriple(*((i_s * cmath.exp(1j * (th + s))).real for s in shifts))
    v = PhaseTriple(*((v_c * cmath.exp(1j * (th + s))).real for s in shifts))
    return SimState(i_f, v, cfg.load_current, expected_dc_voltage(cfg))


def _snap(timeline, steps, h):
    """Segments with switching instants rounded to the step grid."""
    out = []
    acc = 0.0
    start = 0
    period = timeline.period
    for state, dur in timeline.segments:
        acc += dur
        stop = min(steps, int(round(acc / period * steps)))
        if stop > start:
            out.append((stop * h, state))
            start = stop
    if start < steps:
        out.append((steps * h, timeline.segments[-1][0]))
    return out


def _exact(timeline, steps, h):
    """Non-empty segments as ``(end time, state)`` relative to the period start."""
    out = []
    acc = 0.0
    for state, dur in timeline.segments:
        acc += dur
        if dur > 0.0:
            out.append((acc, state))
    # the last edge is the period end on the step grid
    out[-1] = (steps * h, out[-1][1])
    return out


def _limits_ok(y, i_limit, v_limit):
    return (
        abs(y[0]) < i_limit
        and abs(y[1]) < i_limit
        and abs(y[2]) < i_limit
        and abs(y[6]) < i_limit
        and abs(y[3]) < v_limit
        and abs(y[4]) < v_limit
        and abs(y[5]) < v_limit
        and abs(y[7]) < v_limit
    )


def run_simulation(cfg):
    """Integrate the rectifier for ``cfg.duration`` seconds.

    The modulator is sampled once per switching period at the period start.
    With ``edge_mode="exact"`` a step that contains a switching instant is
    split there, so the sample grid stays uniform while gate timing is exact;
    ``edge_mode="snap"`` rounds switching instants to the step grid instead.

    Raises
    ------
    SimulationDivergedError
        If a current exceeds ten times the load current or a voltage ten
        times the line-line peak.
    """
    rhs = _make_rhs(cfg)
    ts = cfg.ts
    steps = int(cfg.steps_per_period)
    h = ts / steps
    tiny = 1e-9 * h
    every = int(cfg.sample_every)
    grid = cfg.grid
    i_limit = DIVERGENCE_FACTOR * max(cfg.load_current, 1.0)
    v_limit = DIVERGENCE_FACTOR * grid.v_line_line_peak
    scheme = Scheme.coerce(cfg.scheme)
    split = _exact if cfg.edge_mode == "exact" else _snap

    y = tuple(initial_state(cfg).to_vector())
    rows = []
    gate_rows = []
    ref_rows = []
    timelines = []
    locations = []
    k_global = 0
    for p in range(cfg.n_periods):
        t0 = p * ts
        theta = grid.angle(t0) - cfg.displacement
        refs, loc, timeline = plan_period(scheme, theta, cfg.m, cfg.load_current, ts)
        timelines.append(timeline)
        locations.append(loc)
        segs = []
        for end, state in split(timeline, steps, h):
            pair = conducting_pair(state, loc)
            segs.append((end, state, *(pair if pair is not None else (-1, -1))))
        idx = 0
        for k in range(steps):
            a = k * h
            b = a + h
            while segs[idx][0] <= a + tiny:
                idx += 1
            end, state, pos, neg = segs[idx]
            if k_global % every == 0:
                rows.append((t0 + a, pos, neg, *y))
                gate_rows.append(state)
                ref_rows.append(refs)
            cur = a
            while end < b - tiny:
                y = rk4_step(rhs, t0 + cur, y, end - cur, pos, neg)
                cur = end
                idx += 1
                end, state, pos, neg = segs[idx]
            y = rk4_step(rhs, t0 + cur, y, b - cur, pos, neg)
            if y[6] < 0.0:
                y = (*y[:6], 0.0, y[7])
            if not _limits_ok(y, i_limit, v_limit):
                raise SimulationDivergedError(
                    f"state left the plausible envelope at t = {t0 + b:.6e} s", t0 + b
                )
            k_global += 1
    return _build_trace(rows, gate_rows, ref_rows, cfg, timelines, locations)


def load_current_at(v_out, cfg):
    """Constant-current load that fades linearly to zero below ``load_min_voltage``."""
    v = np.asarray(v_out, dtype=np.float64)
    return cfg.load_current * np.clip(v / cfg.load_min_voltage, 0.0, 1.0)


def _build_trace(rows, gate_rows, ref_rows, cfg, timelines, locations):
    data = np.array(rows, dtype=np.float64).reshape(-1, 3 + STATE_SIZE)
    t = data[:, 0]
    pos = data[:, 1].astype(int)
    neg = data[:, 2].astype(int)
    y = data[:, 3:]
    i_dc = y[:, 6]
    i_rect = np.zeros((len(t), 3))
    idx = np.arange(len(t))
    conducting = pos >= 0
    i_rect[idx[conducting], pos[conducting]] = i_dc[conducting]
    i_rect[idx[conducting], neg[conducting]] = -i_dc[conducting]
    theta = 2.0 * np.pi * cfg.grid.f_grid * t + cfg.grid.phase_offset
    vpk = cfg.grid.v_phase_peak
    v_grid = np.column_stack(
        [vpk * np.cos(theta), vpk * np.cos(theta - TWO_PI_3), vpk * np.cos(theta + TWO_PI_3)]
    )
    v_out = y[:, 7]
    return Trace(
        t=t,
        v_grid=v_grid,
        i_ref=np.array(ref_rows, dtype=np.float64).reshape(-1, 3),
        gates=np.array(gate_rows, dtype=np.int8).reshape(-1, 3),
        i_rect=i_rect,
        i_src=y[:, 0:3].copy(),
        v_cap=y[:, 3:6].copy(),
        i_dc=i_dc.copy(),
        v_out=v_out.copy(),
        i_load=load_current_at(v_out, cfg),
        config=cfg,
        timelines=timelines,
        locations=locations,
    )
