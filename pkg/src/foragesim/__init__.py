"""Deterministic 2D multi-robot foraging simulator with streak-scaled
self-organized task allocation."""

__version__ = "0.1.0"

from .allocation import (
    AllocationState,
    Mode,
    ObjectType,
    VdrParams,
    VdrState,
    assign_task,
    initial_allocation,
    leave_nest_decision,
    record_leave_outcome,
    record_pickup_event,
    record_trip_outcome,
    vdr_failure,
    vdr_success,
)
from .arena import ArenaConfig, Vec2, World, WorldObject
from .engine import Robot, RobotPhase, SimClock, Simulation
from .experiment import (
    ExperimentConfig,
    PRESETS,
    RunResult,
    run_experiment,
    run_replications,
    set1_config,
    set2_config,
)
from .analysis import (
    BinomialComparison,
    CapabilityRegion,
    ClassificationReport,
    PreferenceLabel,
    bimodality_score,
    binomial_comparison,
    classify_foragers,
    classify_preferences,
    expected_region,
    histogram,
    region_matches_label,
)
