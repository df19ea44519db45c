"""Triangular-carrier realization of the patterns and instrumented control cycles."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .._validation import check_dc_current, check_modulation_index, check_positive
from ..refgen import SECTOR_TABLE, AbsOrdering, classify_abs, locate_sector, reference_currents
from .ontimes import Scheme, dwell_times_trig, ontimes_pattern1, ontimes_pattern2, svm_location
from .states import SwitchingTimeline, SwitchState
from .timeline import assemble_timeline


@dataclass
class OpCounters:
    """Operation tally for one control cycle."""

    multiplications: int = 0
    divisions: int = 0
    additions: int = 0
    subtractions: int = 0
    trig_evals: int = 0
    relational_ops: int = 0
    branches: int = 0
    lookups: int = 0

    def as_dict(self):
        return asdict(self)

    @property
    def arithmetic(self):
        return self.multiplications + self.divisions + self.additions + self.subtractions


def counted_classify(refs, counters):
    """Three compare-and-swap steps ordering the phases by magnitude.

    Strict comparisons keep the result identical to ``classify_abs``.
    """
    idx = [0, 1, 2]
    mag = [abs(refs[0]), abs(refs[1]), abs(refs[2])]
    for i, j in ((0, 1), (1, 2), (0, 1)):
        counters.relational_ops += 1
        counters.branches += 1
        if mag[i] < mag[j]:
            mag[i], mag[j] = mag[j], mag[i]
            idx[i], idx[j] = idx[j], idx[i]
    return AbsOrdering(idx[0], idx[1], idx[2], mag[0], mag[1], mag[2])


def _pulse(duty):
    """Center-aligned pulse bounds (fraction of period) where carrier < duty."""
    return (1.0 - duty) / 2.0, (1.0 + duty) / 2.0


def gate_edges_carrier(on, ts, carrier_resolution=None):
    """Gate timeline obtained by comparing duties against a triangular carrier.

    The carrier falls from 1 to 0 over the first half period and rises back
    to 1, so each gate is high while the carrier sits below its duty, giving
    pulses centered on the period.  With ``carrier_resolution=None`` the
    crossings are exact; otherwise the carrier is sampled at the centers of
    ``carrier_resolution`` ticks.
    """
    ts = check_positive(ts, "ts")
    duties = [min(max(x / ts, 0.0), 1.0) for x in (on.a, on.b, on.c)]
    if carrier_resolution is None:
        return _analytic_timeline(duties, ts)
    n = int(carrier_resolution)
    if n < 100:
        raise ValueError("carrier_resolution must be at least 100 ticks per period")
    carrier = np.abs(2.0 * (np.arange(n) + 0.5) / n - 1.0)
    gates = np.stack([carrier < d for d in duties], axis=1).astype(np.int8)
    codes = gates[:, 0] * 4 + gates[:, 1] * 2 + gates[:, 2]
    cuts = set(np.flatnonzero(np.diff(codes)) + 1)
    if n % 2 == 0:
        cuts.add(n // 2)
    bounds = [0, *sorted(cuts), n]
    tick = ts / n
    segments = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        code = int(codes[lo])
        state = SwitchState((code >> 2) & 1, (code >> 1) & 1, code & 1)
        segments.append((state, (hi - lo) * tick))
    return SwitchingTimeline(segments, ts)


def _analytic_timeline(duties, ts):
    points = {0.0, 0.5, 1.0}
    for d in duties:
        if 0.0 < d < 1.0:
            points.update(_pulse(d))
    points = sorted(points)
    segments = []
    for lo, hi in zip(points[:-1], points[1:]):
        mid = 0.5 * (lo + hi)
        carrier = abs(2.0 * mid - 1.0)
        state = SwitchState(*(int(carrier < d) for d in duties))
        segments.append((state, (hi - lo) * ts))
    return SwitchingTimeline(segments, ts)


def counted_cycle(scheme, theta, m, i_dc=5.0, ts=1.0 / 18000.0):
    """Run one control cycle of ``scheme`` and tally the operations it needs.

    The carrier patterns order the measured references and compare duties
    with the carrier; the space-vector baseline locates the sector and
    evaluates sine and cosine.  Producing the reference currents themselves
    is common to all schemes and not counted.

    Returns
    -------
    timeline : SwitchingTimeline
    counters : OpCounters
    """
    scheme = Scheme.coerce(scheme)
    m = check_modulation_index(m)
    i_dc = check_dc_current(i_dc)
    counters = OpCounters()
    if scheme is Scheme.SVM:
        loc = svm_location(theta, counters)
        dt = dwell_times_trig(loc.theta_local, m, ts, counters)
        # sector -> phase roles, then subsector -> state sequence
        counters.lookups += 2
        return assemble_timeline(Scheme.PATTERN_I, loc, dt), counters

    refs = reference_currents(theta, m, i_dc)
    ordering = counted_classify(refs, counters)
    if scheme is Scheme.PATTERN_I:
        on = ontimes_pattern1(ordering, ts, i_dc)
    else:
        on = ontimes_pattern2(ordering, ts, i_dc)
    # max and mid on-times: one multiply and one divide each
    counters.multiplications += 2
    counters.divisions += 2
    return gate_edges_carrier(on, ts), counters


def _sector_consistent(ordering, refs):
    """Resolve a mid/min magnitude tie the way the sector location does.

    At an exact subsector boundary either phase may be clamped; the choice
    must agree with the half that decides which pair conducts.
    """
    if ordering.mid_val != ordering.min_val or ordering.max_val == 0.0:
        return ordering
    loc = locate_sector(refs)
    _, _, p1, p2 = SECTOR_TABLE[loc.sector]
    clamp = p2 if loc.half == "a" else p1
    if ordering.min_phase == clamp:
        return ordering
    return ordering._replace(mid_phase=ordering.min_phase, min_phase=ordering.mid_phase)


def carrier_ontimes(scheme, refs, ts, i_dc):
    """Pattern on-times straight from a reference triple."""
    scheme = Scheme.coerce(scheme)
    ordering = _sector_consistent(classify_abs(refs), refs)
    if scheme is Scheme.PATTERN_II:
        return ontimes_pattern2(ordering, ts, i_dc)
    return ontimes_pattern1(ordering, ts, i_dc)
