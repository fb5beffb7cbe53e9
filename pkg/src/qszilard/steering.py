"""Linear steering witnesses and their relation to the work certificate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import bounds, engine, qmath, states
from .errors import InvalidParamError

# Measurement axes per setting count, ordered to match the decompositions:
# the first setting probes the population axis, the second and third the
# coherence axes.
AXES = {2: ("z", "y"), 3: ("z", "y", "x")}


@dataclass(frozen=True)
class SteeringReport:
    n_settings: int
    value: float
    bound: float
    violation: float


@dataclass(frozen=True)
class ScatterResult:
    eta: np.ndarray
    q: np.ndarray
    steering_violation: np.ndarray
    work_violation: np.ndarray
    spearman: float


def pair_correlator(rho, axis):
    """<sigma_axis x sigma_axis> on a two-qubit state."""
    sigma = qmath.PAULIS[axis]
    return qmath.expectation(rho, qmath.tensor(sigma, sigma))


def linear_steering(rho, n_settings):
    """Averaged same-axis correlator strength versus the unsteerable bound.

    S_n = (1/n) sum_k |<sigma_k x sigma_k>| over the n measurement axes;
    hidden-state models keep S_n <= 1/sqrt(n).
    """
    if n_settings not in AXES:
        raise InvalidParamError(f"n_settings must be 2 or 3, got {n_settings}")
    rho = qmath.validate_density(rho)
    if rho.shape != (4, 4):
        raise InvalidParamError(f"witness needs a two-qubit state, got shape {rho.shape}")
    value = np.mean([abs(pair_correlator(rho, axis)) for axis in AXES[n_settings]])
    limit = 1.0 / np.sqrt(n_settings)
    return SteeringReport(n_settings=n_settings, value=float(value), bound=limit,
                          violation=float(value - limit))


def correlation_scatter(family, strategy, eta_grid, q_grid):
    """Steering violation versus work violation over a parameter grid.

    The witness setting count is the number of measurement directions the
    strategy actually uses.  Returns all grid points plus the Spearman rank
    correlation between the two violations.
    """
    strategy = engine.check_strategy(strategy)
    n_settings = int(np.count_nonzero(strategy))
    if n_settings not in AXES:
        raise InvalidParamError(
            f"strategy must use 2 or 3 measurement settings, got {n_settings}")
    etas, qs, s_viol, w_viol = [], [], [], []
    for eta in np.asarray(eta_grid, dtype=float):
        for q in np.asarray(q_grid, dtype=float):
            rho = states.make_state(family, eta, q)
            etas.append(eta)
            qs.append(q)
            s_viol.append(linear_steering(rho, n_settings).violation)
            w_viol.append(bounds.violation(rho, strategy))
    s_viol = np.array(s_viol)
    w_viol = np.array(w_viol)
    rank = stats.spearmanr(s_viol, w_viol)[0]
    return ScatterResult(eta=np.array(etas), q=np.array(qs),
                         steering_violation=s_viol, work_violation=w_viol,
                         spearman=float(rank))
