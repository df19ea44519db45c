"""Carrier-based modulation engine and switched simulator for the three-phase
three-switch buck-type rectifier."""

from .analysis import (
    MetricsReport,
    SpectrumPoint,
    analyze_trace,
    clamp_and_transition_stats,
    fundamental,
    per_period_average,
    resource_report,
    thd,
)
from .config import parse_config
from .modulator import (
    CarrierModulator,
    OpCounters,
    Scheme,
    SpaceVectorModulator,
    SwitchingTimeline,
    SwitchState,
    assemble_timeline,
    conduction_map,
    counted_cycle,
    dwell_times_from_currents,
    dwell_times_trig,
    gate_edges_carrier,
    ontimes_pattern1,
    ontimes_pattern2,
)
from .refgen import (
    AbsOrdering,
    GridConfig,
    PhaseTriple,
    ReferenceGenerator,
    SectorLocation,
    classify_abs,
    locate_sector,
    reference_currents,
)
from .simulator import (
    CircuitParams,
    SimConfig,
    SimState,
    Trace,
    derivative,
    rectifier_port,
    run_simulation,
    unity_pf_displacement,
)

__version__ = "0.1.0"
