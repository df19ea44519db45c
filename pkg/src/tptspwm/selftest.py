"""Randomized invariant suite shared by the ``selftest`` command and the tests."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .modulator import (
    ALL_ON,
    Scheme,
    carrier_ontimes,
    conduction_map,
    dwell_times_from_currents,
    dwell_times_trig,
    gate_edges_carrier,
    ontimes_pattern1,
    ontimes_pattern2,
    plan_period,
)
from .refgen import classify_abs, locate_sector, reference_currents

DEFAULT_SEED = 20240518
SCHEMES = (Scheme.PATTERN_I, Scheme.PATTERN_II, Scheme.SVM)


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    witness: str = ""
    fatal: bool = True
    worst: float = 0.0

    def line(self):
        status = "PASS" if self.passed else ("FAIL" if self.fatal else "NOTE")
        text = f"[{status}] {self.name} ({self.checked} checks"
        if self.worst:
            text += f", worst {self.worst:.3e}"
        text += ")"
        if self.witness:
            text += f" witness: {self.witness}"
        return text


def random_points(n, seed=DEFAULT_SEED):
    """``n`` operating points with theta uniform on [0, 2 pi) and m on [0, 1]."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    m = rng.uniform(0.0, 1.0, n)
    return list(zip(theta.tolist(), m.tolist()))


def _witness(theta, m, scheme, detail=""):
    text = f"theta={math.degrees(theta):.6f} deg, m={m:.6f}, scheme={scheme.value}"
    return f"{text}, {detail}" if detail else text


def _weighted_average(timeline, loc, i_dc, conduction):
    acc = [0.0, 0.0, 0.0]
    for state, dur in timeline.segments:
        i = conduction(state, loc, i_dc)
        for j in range(3):
            acc[j] += i[j] * dur
    return [a / timeline.period for a in acc]


def check_balance(points, i_dc=5.0, ts=1.0 / 18000.0, conduction=conduction_map):
    """Period-averaged rectifier currents reproduce the references."""
    tol = 1e-9 * i_dc
    worst = 0.0
    checked = 0
    for theta, m in points:
        for scheme in SCHEMES:
            refs, loc, tl = plan_period(scheme, theta, m, i_dc, ts)
            timelines = [tl]
            if scheme is not Scheme.SVM and m > 0.0:
                timelines.append(gate_edges_carrier(carrier_ontimes(scheme, refs, ts, i_dc), ts))
            for timeline in timelines:
                avg = _weighted_average(timeline, loc, i_dc, conduction)
                err = max(abs(avg[j] - refs[j]) for j in range(3))
                worst = max(worst, err)
                checked += 1
                if err > tol:
                    return PropertyResult(
                        "balance", False, checked,
                        _witness(theta, m, scheme, f"error {err:.3e} A"), worst=worst,
                    )
    return PropertyResult("balance", True, checked, worst=worst)


def check_closed_forms(points, i_dc=5.0, ts=1.0 / 18000.0, classify=classify_abs):
    """On-times equal the tabulated closed forms in both patterns."""
    checked = 0
    for theta, m in points:
        refs = reference_currents(theta, m, i_dc)
        _, mid, hi = sorted(abs(v) for v in refs)
        ordering = classify(refs)
        for scheme, fn in ((Scheme.PATTERN_I, ontimes_pattern1), (Scheme.PATTERN_II, ontimes_pattern2)):
            on = fn(ordering, ts, i_dc)
            expect_min = ts if scheme is Scheme.PATTERN_I else hi * ts / i_dc
            got = (on[ordering.max_phase], on[ordering.mid_phase], on[ordering.min_phase])
            want = (hi * ts / i_dc, mid * ts / i_dc, expect_min)
            checked += 1
            if got != want:
                return PropertyResult(
                    "closed_form_dispatch", False, checked,
                    _witness(theta, m, scheme, f"got {got}, want {want}"),
                )
    return PropertyResult("closed_form_dispatch", True, checked)


def check_sequences(points, i_dc=5.0, ts=1.0 / 18000.0):
    """Palindrome, centered redundant state and single switching per phase."""
    checked = 0
    for theta, m in points:
        for scheme in SCHEMES:
            _, _, tl = plan_period(scheme, theta, m, i_dc, ts)
            checked += 1
            problem = ""
            if not tl.is_palindrome():
                problem = "not palindromic"
            elif tl.center_states() != [ALL_ON, ALL_ON]:
                problem = "state 111 not centered"
            elif abs(tl.total_duration() - ts) > 1e-12 * ts:
                problem = "durations do not sum to the period"
            else:
                for j in range(3):
                    edges = tl.edges(j)
                    rising = sum(1 for _, r in edges if r)
                    if rising > 1 or len(edges) - rising > 1:
                        problem = f"phase {'ABC'[j]} switches {len(edges)} times"
                        break
            if problem:
                return PropertyResult("sequence_legality", False, checked, _witness(theta, m, scheme, problem))
    return PropertyResult("sequence_legality", True, checked)


def check_trig_equivalence(points, i_dc=5.0, ts=1.0 / 18000.0):
    """Trigonometric dwell times agree with the current-based ones."""
    worst = 0.0
    checked = 0
    for theta, m in points:
        if m == 0.0:
            continue
        refs = reference_currents(theta, m, i_dc)
        loc = locate_sector(refs)
        from_currents = dwell_times_from_currents(refs, loc, ts, i_dc)
        from_trig = dwell_times_trig(loc.theta_local, m, ts)
        err = max(abs(a - b) for a, b in zip(from_currents, from_trig))
        worst = max(worst, err / ts)
        checked += 1
        if err > 1e-9 * ts:
            return PropertyResult(
                "trig_current_equivalence", False, checked,
                _witness(theta, m, Scheme.SVM, f"error {err / ts:.3e} Ts"), worst=worst,
            )
    return PropertyResult("trig_current_equivalence", True, checked, worst=worst)


def check_continuity(n_boundaries=12, m=0.7, i_dc=5.0, ts=1.0, eps=1e-9):
    """On-time levels change by O(eps) across every 30 degree boundary.

    Per-phase gate on-times swap between phases at a boundary (the clamp or
    the middle role moves to the other phase), so the check compares the
    sorted on-time triple, which is what the closed forms define.
    """
    checked = 0
    for k in range(n_boundaries):
        theta = math.radians(-30.0 + 30.0 * k)
        for scheme in SCHEMES:
            before = sorted(plan_period(scheme, theta - eps, m, i_dc, ts)[2].gate_on_times())
            after = sorted(plan_period(scheme, theta + eps, m, i_dc, ts)[2].gate_on_times())
            jump = max(abs(a - b) for a, b in zip(before, after))
            checked += 1
            if jump > 1e-6 * ts:
                return PropertyResult(
                    "continuity", False, checked,
                    _witness(theta, m, scheme, f"on-time jump {jump:.3e}"),
                )
    return PropertyResult("continuity", True, checked)


def check_boundary_labels(classify=classify_abs):
    """Tie-break determinism at exact subsector boundaries (informational)."""
    expected = {
        (2.5, -1.25, -1.25): (0, 1, 2),
        (-1.25, 2.5, -1.25): (1, 0, 2),
        (-1.25, -1.25, 2.5): (2, 0, 1),
    }
    for refs, want in expected.items():
        o = classify(refs)
        got = (o.max_phase, o.mid_phase, o.min_phase)
        if got != want:
            return PropertyResult(
                "tie_break_determinism", False, len(expected),
                f"refs={refs}, ordering {got} differs from {want}", fatal=False,
            )
    return PropertyResult("tie_break_determinism", True, len(expected), fatal=False)


def run_selftest(n=10000, seed=DEFAULT_SEED, conduction=conduction_map, classify=classify_abs):
    """Run every invariant; returns the results and the elapsed seconds."""
    start = time.perf_counter()
    points = random_points(n, seed)
    results = [
        check_balance(points, conduction=conduction),
        check_closed_forms(points, classify=classify),
        check_sequences(points),
        check_trig_equivalence(points),
        check_continuity(),
        check_boundary_labels(classify=classify),
    ]
    return results, time.perf_counter() - start
