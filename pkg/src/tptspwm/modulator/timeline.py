"""Symmetric six-segment state sequences for one switching period."""

from __future__ import annotations

from ..refgen import SECTOR_TABLE, locate_sector, location_from_angle, reference_currents
from .ontimes import Scheme, dwell_times_from_currents, dwell_times_trig, svm_location
from .states import ALL_OFF, ALL_ON, SwitchingTimeline, SwitchState


def sequence_states(scheme, loc):
    """``(zero, side, center)`` states used in subsector ``loc``.

    The side state pairs the extremal phase with the subsector's smallest
    phase.  The clamping zero state keeps that smallest phase switched on.
    """
    scheme = Scheme.coerce(scheme)
    ext, _, p1, p2 = SECTOR_TABLE[loc.sector]
    min_phase = p2 if loc.half == "a" else p1
    side = SwitchState.from_phases((ext, min_phase))
    if scheme is Scheme.PATTERN_II:
        zero = ALL_OFF
    else:
        zero = SwitchState.from_phases((min_phase,))
    return zero, side, ALL_ON


def assemble_timeline(scheme, loc, dt):
    """Palindromic timeline ``T0/2, side/2, center/2, center/2, side/2, T0/2``.

    In half ``a`` the side state carries ``t2`` and the redundant all-on state
    carries ``t1``; half ``b`` swaps them.  The space-vector baseline reuses
    the clamping sequence.
    """
    zero, side, center = sequence_states(scheme, loc)
    if loc.half == "a":
        t_side, t_center = dt.t2, dt.t1
    else:
        t_side, t_center = dt.t1, dt.t2
    half0, half_side, half_center = dt.t0 / 2.0, t_side / 2.0, t_center / 2.0
    segments = [
        (zero, half0),
        (side, half_side),
        (center, half_center),
        (center, half_center),
        (side, half_side),
        (zero, half0),
    ]
    return SwitchingTimeline(segments, dt.t0 + dt.t1 + dt.t2)


def plan_period(scheme, theta, m, i_dc, ts):
    """Reference triple, sector location and timeline for one period.

    The carrier patterns work from the reference currents; the space-vector
    baseline works from the grid angle through sine and cosine.  With
    ``m == 0`` the location falls back to the grid angle.
    """
    scheme = Scheme.coerce(scheme)
    refs = reference_currents(theta, m, i_dc)
    if scheme is Scheme.SVM:
        loc = svm_location(theta)
        dt = dwell_times_trig(loc.theta_local, m, ts)
    else:
        if m == 0.0:
            loc = location_from_angle(theta)
        else:
            loc = locate_sector(refs)
        dt = dwell_times_from_currents(refs, loc, ts, i_dc)
    return refs, loc, assemble_timeline(scheme, loc, dt)
