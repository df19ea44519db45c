"""Three-phase reference currents, amplitude ordering and sector location.

Angles follow the convention that phase A peaks at ``theta = 0``.  Sector 1
spans ``[-30 deg, +30 deg)`` and is split into half ``a`` (``theta < 0``) and
half ``b``.  Sectors advance every 60 degrees of grid angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import (
    check_dc_current,
    check_modulation_index,
    check_operating_points,
    check_positive,
)
from .exceptions import IndeterminateSectorError

PHASES = ("A", "B", "C")
TWO_PI_3 = 2.0 * math.pi / 3.0
SIXTH = math.pi / 6.0

# sector -> (extremal phase, its sign, phase whose |I| sets t1, phase whose |I| sets t2)
SECTOR_TABLE = {
    1: (0, +1, 1, 2),
    2: (2, -1, 0, 1),
    3: (1, +1, 2, 0),
    4: (0, -1, 1, 2),
    5: (2, +1, 0, 1),
    6: (1, -1, 2, 0),
}
_SECTOR_OF = {(ext, sign): s for s, (ext, sign, _, _) in SECTOR_TABLE.items()}


class PhaseTriple(NamedTuple):
    """Per-phase values (A, B, C), in amperes or volts."""

    a: float
    b: float
    c: float

    def __add__(self, other):
        return PhaseTriple(self.a + other[0], self.b + other[1], self.c + other[2])

    def __sub__(self, other):
        return PhaseTriple(self.a - other[0], self.b - other[1], self.c - other[2])

    def scale(self, k):
        return PhaseTriple(self.a * k, self.b * k, self.c * k)

    def total(self):
        return self.a + self.b + self.c

    def permute(self, perm):
        """Return the triple reordered so that slot ``j`` holds ``self[perm[j]]``."""
        return PhaseTriple(self[perm[0]], self[perm[1]], self[perm[2]])


class AbsOrdering(NamedTuple):
    """Phases sorted by absolute reference amplitude, largest first."""

    max_phase: int
    mid_phase: int
    min_phase: int
    max_val: float
    mid_val: float
    min_val: float


class SectorLocation(NamedTuple):
    sector: int
    half: str
    theta_local: float = float("nan")

    @property
    def subsector(self):
        """Index 0..11 of the 30 degree subsector, 0 being 1a."""
        return 2 * (self.sector - 1) + (self.half == "b")

    @property
    def label(self):
        return f"{self.sector}{self.half}"


@dataclass(frozen=True)
class GridConfig:
    """Balanced three-phase grid.

    ``phase_offset`` is the grid angle at ``t = 0``.
    """

    v_line_line_peak: float = 245.0
    f_grid: float = 50.0
    phase_offset: float = 0.0

    def __post_init__(self):
        check_positive(self.v_line_line_peak, "v_line_line_peak")
        check_positive(self.f_grid, "f_grid")

    @property
    def v_phase_peak(self):
        return self.v_line_line_peak / math.sqrt(3.0)

    def angle(self, t):
        return 2.0 * math.pi * self.f_grid * t + self.phase_offset

    def voltages(self, t):
        theta = self.angle(t)
        v = self.v_phase_peak
        return PhaseTriple(
            v * math.cos(theta),
            v * math.cos(theta - TWO_PI_3),
            v * math.cos(theta + TWO_PI_3),
        )


def reference_currents(theta, m, i_dc):
    """Balanced cosine reference currents with peak ``m * i_dc``.

    Raises
    ------
    OvermodulationError
        If ``m`` is outside ``[0, 1]``.
    InvalidDCCurrentError
        If ``i_dc <= 0``.
    """
    m = check_modulation_index(m)
    i_dc = check_dc_current(i_dc)
    peak = m * i_dc
    return PhaseTriple(
        peak * math.cos(theta),
        peak * math.cos(theta - TWO_PI_3),
        peak * math.cos(theta + TWO_PI_3),
    )


def classify_abs(refs):
    """Sort the phases by absolute reference amplitude.

    Ties keep the A-B-C order, so the earlier phase ranks higher.
    """
    mags = [abs(refs[0]), abs(refs[1]), abs(refs[2])]
    order = sorted(range(3), key=lambda j: -mags[j])
    return AbsOrdering(order[0], order[1], order[2], mags[order[0]], mags[order[1]], mags[order[2]])


def _extremal(refs):
    """Phase with the largest absolute reference; a tie goes to the later sector."""
    mags = [abs(v) for v in refs]
    peak = max(mags)
    candidates = [j for j in range(3) if mags[j] == peak]
    if len(candidates) == 1:
        j = candidates[0]
        return j, (1 if refs[j] > 0 else -1)
    sectors = sorted(_SECTOR_OF[(j, 1 if refs[j] > 0 else -1)] for j in candidates)
    # two adjacent sectors meet at the boundary; 6 -> 1 wraps around
    later = 1 if sectors == [1, 6] else sectors[-1]
    ext, sign, _, _ = SECTOR_TABLE[later]
    return ext, sign


def locate_sector(refs):
    """Sector and subsector half of a reference triple.

    The half is ``a`` when the phase that governs ``t2`` has the smaller
    magnitude, which is the phase clamped by the first switching pattern.
    Equal magnitudes resolve to half ``b``.

    Raises
    ------
    IndeterminateSectorError
        If all three references are zero.
    """
    if refs[0] == 0.0 and refs[1] == 0.0 and refs[2] == 0.0:
        raise IndeterminateSectorError("all reference currents are zero")
    ext, sign = _extremal(refs)
    sector = _SECTOR_OF[(ext, sign)]
    _, _, p1, p2 = SECTOR_TABLE[sector]
    half = "a" if abs(refs[p2]) < abs(refs[p1]) else "b"
    # local angle from the vector components; informational only
    alpha = (2.0 * refs[0] - refs[1] - refs[2]) / 3.0
    beta = (refs[1] - refs[2]) / math.sqrt(3.0)
    theta = math.atan2(beta, alpha)
    theta_local = (theta - (sector - 1) * math.pi / 3.0 + math.pi) % (2.0 * math.pi) - math.pi
    if theta_local >= SIXTH:
        theta_local = math.nextafter(SIXTH, 0.0)
    elif theta_local < -SIXTH:
        theta_local = -SIXTH
    return SectorLocation(sector, half, theta_local)


def location_from_angle(theta):
    """Sector location of grid angle ``theta`` without evaluating currents."""
    deg = math.degrees(theta) % 360.0
    shifted = (deg + 30.0) % 360.0
    sector = int(shifted // 60.0) + 1
    if sector > 6:  # rounding at 360
        sector = 1
    local = math.radians(shifted - 60.0 * (sector - 1) - 30.0)
    return SectorLocation(sector, "a" if local < 0.0 else "b", local)


class ReferenceGenerator(TransformerMixin, BaseEstimator):
    """Map operating points ``(theta, m)`` to reference current triples.

    Parameters
    ----------
    i_dc : float
        DC-link current that scales the references.
    """

    def __init__(self, i_dc=5.0):
        self.i_dc = i_dc

    def fit(self, X, y=None):
        check_operating_points(X)
        check_dc_current(self.i_dc)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        X = check_operating_points(X)
        peak = X[:, 1] * check_dc_current(self.i_dc)
        theta = X[:, 0]
        return np.column_stack(
            [
                peak * np.cos(theta),
                peak * np.cos(theta - TWO_PI_3),
                peak * np.cos(theta + TWO_PI_3),
            ]
        )
