"""Hybrid-system model of the TIMP-2 / MT1-MMP / MMP-2 regulatory network.

Piecewise-affine protein dynamics switched by four hysteretic logic
variables, solved with exact event times.
"""

from .analysis import (
    Axis,
    EquilibriumLabel,
    SweepGrid,
    classify_equilibrium,
    detect_chattering_equilibrium,
    detect_cycle,
    sweep,
)
from .core import (
    CycleReport,
    HybridArc,
    HybridState,
    HybridTime,
    InvalidParameters,
    Issue,
    JumpPolicy,
    NetworkParams,
    Segment,
    Termination,
    TrajectoryVerdict,
    check_arc,
    validate_params,
)
from .dynamics import (
    ModeDescriptor,
    flow_map,
    jump_map,
    jump_set_membership,
    mode_target,
    resolve_jump,
)
from .solver import OracleConfig, SolverConfig, crossing_time, simulate, simulate_oracle

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "check_arc",
    "classify_equilibrium",
    "crossing_time",
    "CycleReport",
    "detect_chattering_equilibrium",
    "detect_cycle",
    "EquilibriumLabel",
    "flow_map",
    "HybridArc",
    "HybridState",
    "HybridTime",
    "InvalidParameters",
    "Issue",
    "jump_map",
    "jump_set_membership",
    "JumpPolicy",
    "mode_target",
    "ModeDescriptor",
    "NetworkParams",
    "OracleConfig",
    "resolve_jump",
    "Segment",
    "simulate",
    "simulate_oracle",
    "SolverConfig",
    "sweep",
    "SweepGrid",
    "Termination",
    "TrajectoryVerdict",
    "validate_params",
]
