"""Closed-form on-times and dwell times for one switching period."""

from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple, Optional

from .._validation import check_dc_current, check_modulation_index, check_positive
from ..exceptions import AngleDomainError, OvermodulationError, SectorMismatchError
from ..refgen import SECTOR_TABLE, SIXTH, SectorLocation

SQRT3_2 = math.sqrt(3.0) / 2.0
TWO_PI = 2.0 * math.pi
PI_3 = math.pi / 3.0
# relative slack for dwell times that come out negative through rounding only
DWELL_TOL = 1e-9


class Scheme(str, Enum):
    PATTERN_I = "pattern1"
    PATTERN_II = "pattern2"
    SVM = "svm"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        aliases = {
            "pattern1": cls.PATTERN_I,
            "patterni": cls.PATTERN_I,
            "i": cls.PATTERN_I,
            "1": cls.PATTERN_I,
            "pattern2": cls.PATTERN_II,
            "patternii": cls.PATTERN_II,
            "ii": cls.PATTERN_II,
            "2": cls.PATTERN_II,
            "svm": cls.SVM,
            "svmtrig": cls.SVM,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown modulation scheme {value!r}") from None


class DwellTimes(NamedTuple):
    t0: float
    t1: float
    t2: float

    @property
    def period(self):
        return self.t0 + self.t1 + self.t2


class OnTimes(NamedTuple):
    """Per-phase gate on-durations in seconds."""

    a: float
    b: float
    c: float
    clamped_phase: Optional[int] = None

    def duties(self, ts):
        return (self.a / ts, self.b / ts, self.c / ts)


def _check_ordering(ord_, ts, i_dc):
    check_positive(ts, "ts")
    i_dc = check_dc_current(i_dc)
    if ord_.max_val > i_dc:
        raise OvermodulationError(
            f"largest reference {ord_.max_val!r} A exceeds DC-link current {i_dc!r} A"
        )
    return i_dc


def _by_phase(ord_, t_max, t_mid, t_min, clamped):
    out = [0.0, 0.0, 0.0]
    out[ord_.max_phase] = t_max
    out[ord_.mid_phase] = t_mid
    out[ord_.min_phase] = t_min
    return OnTimes(out[0], out[1], out[2], clamped)


def ontimes_pattern1(ord_, ts, i_dc):
    """On-times of the clamping pattern: the smallest phase stays on all period."""
    i_dc = _check_ordering(ord_, ts, i_dc)
    t_max = ord_.max_val * ts / i_dc
    t_mid = ord_.mid_val * ts / i_dc
    return _by_phase(ord_, t_max, t_mid, ts, ord_.min_phase)


def ontimes_pattern2(ord_, ts, i_dc):
    """On-times of the non-clamping pattern.

    The smallest phase follows the largest one, so nothing is clamped.
    """
    i_dc = _check_ordering(ord_, ts, i_dc)
    t_max = ord_.max_val * ts / i_dc
    t_mid = ord_.mid_val * ts / i_dc
    return _by_phase(ord_, t_max, t_mid, t_max, None)


def _finish_dwell(t1, t2, ts):
    tol = DWELL_TOL * ts
    t0 = ts - t1 - t2
    if t0 < -tol:
        raise OvermodulationError(f"active dwell {t1 + t2!r} s exceeds period {ts!r} s")
    return DwellTimes(max(t0, 0.0), t1, t2)


def dwell_times_from_currents(refs, loc, ts, i_dc):
    """Zero and active dwell times read off the reference currents.

    ``t1`` and ``t2`` are the normalized magnitudes of the two non-extremal
    phases of the sector.  In sector 1 these are ``-I_B`` and ``-I_C``.

    Raises
    ------
    SectorMismatchError
        If a non-extremal reference has the wrong sign for ``loc``.
    """
    check_positive(ts, "ts")
    i_dc = check_dc_current(i_dc)
    _, sign, p1, p2 = SECTOR_TABLE[loc.sector]
    t1 = -sign * refs[p1] * ts / i_dc
    t2 = -sign * refs[p2] * ts / i_dc
    tol = DWELL_TOL * ts
    if t1 < -tol or t2 < -tol:
        raise SectorMismatchError(
            f"references {tuple(refs)!r} do not belong to sector {loc.sector}"
        )
    return _finish_dwell(max(t1, 0.0), max(t2, 0.0), ts)


def dwell_times_trig(theta_local, m, ts, counters=None):
    """Dwell times of conventional space-vector modulation.

    Evaluates ``t1 = m ts sin(pi/6 - theta)`` and ``t2 = m ts sin(pi/6 + theta)``
    through one sine and one cosine of the sector-local angle.
    """
    if not (-SIXTH <= theta_local < SIXTH):
        raise AngleDomainError(f"sector-local angle {theta_local!r} outside [-pi/6, pi/6)")
    m = check_modulation_index(m)
    check_positive(ts, "ts")
    s = math.sin(theta_local)
    c = math.cos(theta_local)
    half_c = 0.5 * c
    k_s = SQRT3_2 * s
    m_ts = m * ts
    t1 = m_ts * (half_c - k_s)
    t2 = m_ts * (half_c + k_s)
    if counters is not None:
        counters.trig_evals += 2
        counters.multiplications += 5
        counters.subtractions += 1
        counters.additions += 1
    dt = _finish_dwell(max(t1, 0.0), max(t2, 0.0), ts)
    if counters is not None:
        counters.subtractions += 2
    return dt


def ontimes_from_dwell(scheme, loc, dt):
    """Gate on-times implied by a dwell-time split and the state sequence."""
    scheme = Scheme.coerce(scheme)
    ext, _, p1, p2 = SECTOR_TABLE[loc.sector]
    if loc.half == "a":
        min_phase, side, center = p2, dt.t2, dt.t1
    else:
        min_phase, side, center = p1, dt.t1, dt.t2
    mid_phase = p1 if min_phase == p2 else p2
    out = [0.0, 0.0, 0.0]
    out[ext] = side + center
    out[mid_phase] = center
    if scheme is Scheme.PATTERN_II:
        out[min_phase] = side + center
        clamped = None
    else:
        out[min_phase] = dt.t0 + side + center
        clamped = min_phase
    return OnTimes(out[0], out[1], out[2], clamped)


def svm_location(theta, counters=None):
    """Sector and local angle from the grid angle, as the trig baseline does it."""
    phi = (theta + SIXTH) % TWO_PI
    k = int(phi * (3.0 / math.pi))
    if k > 5:
        k = 5
    theta_local = phi - k * PI_3 - SIXTH
    if theta_local >= SIXTH:
        theta_local = math.nextafter(SIXTH, 0.0)
    elif theta_local < -SIXTH:
        theta_local = -SIXTH
    half = "a" if theta_local < 0.0 else "b"
    if counters is not None:
        counters.additions += 1
        counters.divisions += 1
        counters.multiplications += 2
        counters.subtractions += 2
        counters.relational_ops += 3
        counters.branches += 3
    return SectorLocation(k + 1, half, theta_local)
