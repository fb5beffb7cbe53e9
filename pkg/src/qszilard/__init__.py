"""Work extraction from a two-qubit measurement engine.

A memory qubit shares correlations with a thermal medium qubit; measuring
the memory and conditioning a unitary on the outcome extracts work from the
medium.  The package computes the extracted work for the engine's three
measurement settings, the closed-form and LP ceilings that any hidden-state
model must respect, linear steering witnesses, and finite-shot Monte Carlo
estimates of all of it.
"""

from .bounds import (
    LhsEnsemble,
    lhs_bound_closed,
    lhs_bound_oracle,
    replay_ensemble,
    sphere_points,
    violation,
    violation_boundary,
)
from .engine import (
    Decomposition,
    EngineRun,
    alpha_angle,
    average_work,
    check_strategy,
    decomposition_vectors,
    energy,
    make_decomposition,
    run_protocol,
    run_protocol_deferred,
)
from .errors import (
    DecompositionMismatchError,
    InfeasibleConstraintError,
    InvalidBlochError,
    InvalidConfigError,
    InvalidParamError,
    InvalidStateError,
    InvalidStrategyError,
    NoConvergenceError,
    NonDiagonalReducedError,
    QszilardError,
)
from .shots import ShotConfig, WorkEstimate, sample_average_work, sample_run
from .states import (
    FAMILIES,
    classical_correlated,
    effective_eta,
    eta_from_beta,
    gibbs,
    gibbs_invariant,
    make_state,
    pure_entangled,
    werner,
)
from .steering import ScatterResult, SteeringReport, correlation_scatter, linear_steering

__version__ = "0.1.0"

__all__ = [
    "Decomposition",
    "DecompositionMismatchError",
    "EngineRun",
    "FAMILIES",
    "InfeasibleConstraintError",
    "InvalidBlochError",
    "InvalidConfigError",
    "InvalidParamError",
    "InvalidStateError",
    "InvalidStrategyError",
    "LhsEnsemble",
    "NoConvergenceError",
    "NonDiagonalReducedError",
    "QszilardError",
    "ScatterResult",
    "ShotConfig",
    "SteeringReport",
    "WorkEstimate",
    "alpha_angle",
    "average_work",
    "check_strategy",
    "classical_correlated",
    "correlation_scatter",
    "decomposition_vectors",
    "effective_eta",
    "energy",
    "eta_from_beta",
    "gibbs",
    "gibbs_invariant",
    "lhs_bound_closed",
    "lhs_bound_oracle",
    "linear_steering",
    "make_state",
    "make_decomposition",
    "pure_entangled",
    "replay_ensemble",
    "run_protocol",
    "run_protocol_deferred",
    "sample_average_work",
    "sample_run",
    "sphere_points",
    "violation",
    "violation_boundary",
    "werner",
]
