"""Switch states, switching timelines and the rectifier conduction map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ..refgen import PhaseTriple

ZERO_TRIPLE = PhaseTriple(0.0, 0.0, 0.0)

# Signed ordering (highest, middle, lowest) of the references in each 30 degree
# subsector, indexed 0 = 1a ... 11 = 6b.  Under unity power factor this is also
# the ordering of the phase voltages, which decides the diode that conducts.
SIGNED_ORDER = (
    (0, 2, 1),
    (0, 1, 2),
    (0, 1, 2),
    (1, 0, 2),
    (1, 0, 2),
    (1, 2, 0),
    (1, 2, 0),
    (2, 1, 0),
    (2, 1, 0),
    (2, 0, 1),
    (2, 0, 1),
    (0, 2, 1),
)


class SwitchState(NamedTuple):
    """Gate signals (s_A, s_B, s_C) of the three switches."""

    a: int
    b: int
    c: int

    @classmethod
    def parse(cls, bits):
        if len(bits) != 3 or set(bits) - {"0", "1"}:
            raise ValueError(f"switch state must be three binary digits, got {bits!r}")
        return cls(int(bits[0]), int(bits[1]), int(bits[2]))

    @classmethod
    def from_phases(cls, phases):
        on = set(phases)
        return cls(int(0 in on), int(1 in on), int(2 in on))

    def __str__(self):
        return f"{self.a}{self.b}{self.c}"

    @property
    def n_on(self):
        return self.a + self.b + self.c

    @property
    def is_zero(self):
        """True when at most one switch is on, so no AC-side current flows."""
        return self.n_on < 2


ALL_ON = SwitchState(1, 1, 1)
ALL_OFF = SwitchState(0, 0, 0)


def conducting_pair(state, loc):
    """Phases tied to the positive and negative rail, or ``None`` in a zero state."""
    if state.is_zero:
        return None
    on = [j for j in SIGNED_ORDER[loc.subsector] if state[j]]
    return on[0], on[-1]


def conduction_map(state, loc, i_dc):
    """Rectifier-side phase currents for a switch state.

    The DC-link current enters the conducting phase with the highest voltage
    and returns through the one with the lowest.  Zero states carry nothing;
    use :func:`conducting_pair` to tell them apart from ``i_dc == 0``.
    """
    pair = conducting_pair(state, loc)
    if pair is None:
        return ZERO_TRIPLE
    out = [0.0, 0.0, 0.0]
    out[pair[0]] = i_dc
    out[pair[1]] = -i_dc
    return PhaseTriple(*out)


@dataclass
class SwitchingTimeline:
    """Ordered ``(state, duration)`` segments spanning one switching period."""

    segments: list = field(default_factory=list)
    period: float = 0.0

    @property
    def states(self):
        return [s for s, _ in self.segments]

    @property
    def durations(self):
        return [d for _, d in self.segments]

    def total_duration(self):
        return sum(self.durations)

    def is_palindrome(self):
        states = self.states
        return states == states[::-1]

    def center_states(self):
        n = len(self.segments)
        if n % 2:
            return [self.segments[n // 2][0]]
        return [self.segments[n // 2 - 1][0], self.segments[n // 2][0]]

    def gate_on_times(self):
        on = [0.0, 0.0, 0.0]
        for state, dur in self.segments:
            for j in range(3):
                if state[j]:
                    on[j] += dur
        return PhaseTriple(*on)

    def boundaries(self):
        t = 0.0
        out = [0.0]
        for _, dur in self.segments:
            t += dur
            out.append(t)
        return out

    def edges(self, phase):
        """Gate transitions of one phase as ``(time, rising)`` pairs.

        Zero-length segments are skipped.  Only transitions inside the period
        are reported.
        """
        out = []
        t = 0.0
        prev = None
        for state, dur in self.segments:
            if dur <= 0.0:
                continue
            level = state[phase]
            if prev is not None and level != prev:
                out.append((t, level == 1))
            prev = level
            t += dur
        return out

    def state_at(self, t):
        acc = 0.0
        for state, dur in self.segments:
            acc += dur
            if t < acc:
                return state
        return self.segments[-1][0]

    def average_currents(self, loc, i_dc):
        """Period-averaged rectifier currents for a constant DC-link current."""
        acc = [0.0, 0.0, 0.0]
        for state, dur in self.segments:
            i = conduction_map(state, loc, i_dc)
            acc[0] += i[0] * dur
            acc[1] += i[1] * dur
            acc[2] += i[2] * dur
        return PhaseTriple(acc[0] / self.period, acc[1] / self.period, acc[2] / self.period)

    def collapsed(self):
        """Drop zero-length segments and merge neighbours with equal states."""
        out = []
        for state, dur in self.segments:
            if dur <= 0.0:
                continue
            if out and out[-1][0] == state:
                out[-1] = (state, out[-1][1] + dur)
            else:
                out.append((state, dur))
        return SwitchingTimeline(out, self.period)
