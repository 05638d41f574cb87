"""Dual-engine epidemic simulation toolkit.

Compartmental SIR curves (unit-step and RK4), their agent-based counterpart
driven by a Markov movement chain, deduction of agent-level parameters from
the compartmental ones, and statistical equivalence checks between the two
engines.
"""

from ._core import (
    AsirConfig,
    AsirError,
    BridgeResult,
    Ensemble,
    EnsembleReport,
    ErgodicityReport,
    FailureModeResult,
    FailureModeSpec,
    PointMassInit,
    ReportPoint,
    SirCurve,
    SirParams,
    SplitInit,
    StationaryDistribution,
    StationaryInit,
    StepRecord,
    TransitionMatrix,
    UniformInit,
    deduce_asir,
    equivalence_report,
    ergodicity,
    failure_mode_experiment,
    implied_sir,
    meetup_probability,
    run_ensemble,
    run_replicate,
    simulate_sir_euler,
    simulate_sir_rk4,
    stationary_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "AsirConfig",
    "AsirError",
    "BridgeResult",
    "Ensemble",
    "EnsembleReport",
    "ErgodicityReport",
    "FailureModeResult",
    "FailureModeSpec",
    "PointMassInit",
    "ReportPoint",
    "SirCurve",
    "SirParams",
    "SplitInit",
    "StationaryDistribution",
    "StationaryInit",
    "StepRecord",
    "TransitionMatrix",
    "UniformInit",
    "deduce_asir",
    "equivalence_report",
    "ergodicity",
    "failure_mode_experiment",
    "implied_sir",
    "meetup_probability",
    "run_ensemble",
    "run_replicate",
    "simulate_sir_euler",
    "simulate_sir_rk4",
    "stationary_distribution",
]
