"""Switching-pattern computation for the three-switch buck rectifier."""

from .carrier import (
    OpCounters,
    carrier_ontimes,
    counted_classify,
    counted_cycle,
    gate_edges_carrier,
)
from .estimators import CarrierModulator, SpaceVectorModulator
from .ontimes import (
    DwellTimes,
    OnTimes,
    Scheme,
    dwell_times_from_currents,
    dwell_times_trig,
    ontimes_from_dwell,
    ontimes_pattern1,
    ontimes_pattern2,
    svm_location,
)
from .states import (
    ALL_OFF,
    ALL_ON,
    SIGNED_ORDER,
    SwitchingTimeline,
    SwitchState,
    conducting_pair,
    conduction_map,
)
from .timeline import assemble_timeline, plan_period, sequence_states

__all__ = [
    "ALL_OFF",
    "ALL_ON",
    "SIGNED_ORDER",
    "CarrierModulator",
    "DwellTimes",
    "OnTimes",
    "OpCounters",
    "Scheme",
    "SpaceVectorModulator",
    "SwitchState",
    "SwitchingTimeline",
    "assemble_timeline",
    "carrier_ontimes",
    "conducting_pair",
    "conduction_map",
    "counted_classify",
    "counted_cycle",
    "dwell_times_from_currents",
    "dwell_times_trig",
    "gate_edges_carrier",
    "ontimes_from_dwell",
    "ontimes_pattern1",
    "ontimes_pattern2",
    "plan_period",
    "sequence_states",
    "svm_location",
]
