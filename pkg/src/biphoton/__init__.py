"""Desk-scale simulator of two-photon interferometry and entangled-pair statistics."""

from .linalg import (
    DensityOperator,
    Operator,
    StateVector,
    apply,
    basis_state,
    expectation,
    identity,
    outer,
    partial_trace,
    tensor,
)
from .optics import (
    PhaseSettings,
    SourceKind,
    beam_splitter,
    circuit_unitary,
    make_source,
    phase_shifter,
)
from .measurement import (
    CoincidenceTally,
    DetectionEvent,
    JointProbabilities,
    born_probabilities,
    marginals,
    sample_events,
    sample_outcomes,
    tally,
)
from .analysis import (
    ChshResult,
    FringeScan,
    chsh,
    coincidence_law,
    correlation,
    fringe_visibility,
    joint_probabilities,
    local_coherence,
    no_signaling_audit,
    phase_grid,
    state_discrimination_report,
    tsirelson_scan,
    visibility,
)
from .experiments import (
    ExperimentSpec,
    SweepSpec,
    Verdict,
    run_cat,
    run_controls,
    run_delayed_choice,
    run_preset,
    run_rtm,
)

__version__ = "0.1.0"

__all__ = [
    "ChshResult",
    "CoincidenceTally",
    "DensityOperator",
    "DetectionEvent",
    "ExperimentSpec",
    "FringeScan",
    "JointProbabilities",
    "Operator",
    "PhaseSettings",
    "SourceKind",
    "StateVector",
    "SweepSpec",
    "Verdict",
    "apply",
    "basis_state",
    "beam_splitter",
    "born_probabilities",
    "chsh",
    "circuit_unitary",
    "coincidence_law",
    "correlation",
    "expectation",
    "fringe_visibility",
    "identity",
    "joint_probabilities",
    "local_coherence",
    "make_source",
    "marginals",
    "no_signaling_audit",
    "outer",
    "partial_trace",
    "phase_grid",
    "phase_shifter",
    "run_cat",
    "run_controls",
    "run_delayed_choice",
    "run_preset",
    "run_rtm",
    "sample_events",
    "sample_outcomes",
    "state_discrimination_report",
    "tally",
    "tensor",
    "tsirelson_scan",
    "visibility",
]
