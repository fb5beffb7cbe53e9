"""Classical work ceiling for measurement-feedback extraction.

If the memory qubit holds a probabilistic mixture of single-qubit states
(average Bloch vector pinned to the thermal one), the best any announcement
strategy can do is bounded in closed form by ``lhs_bound_closed``.  The
``lhs_bound_oracle`` cross-checks that expression by brute force: it
discretizes the Bloch sphere, lets the announcer pick the work-maximizing
outcome per hidden state, and solves the resulting linear program over
mixture weights exactly.

The closed form is attained exactly when |eta| <= c1 / sqrt(c2^2 + c3^2);
beyond that the true optimum mixes polar and equatorial hidden states and
the expression turns into a slight over-estimate (still a valid ceiling,
no longer tight).  The oracle has no such restriction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine, qmath, simplex, states
from .errors import InvalidParamError

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
MIN_SPHERE_POINTS = 16
SUPPORT_TOL = 1e-12
BOUNDARY_TOL = 1e-9
# Excess below this at q=1 counts as "no genuine crossing": states that merely
# saturate the ceiling produce rounding-level excess that bisection would chase.
BOUNDARY_SIGN_TOL = 1e-12


def sphere_points(resolution):
    """Near-uniform unit vectors from a Fibonacci spiral, poles included."""
    n = int(resolution)
    if n < MIN_SPHERE_POINTS:
        raise InvalidParamError(f"resolution must be >= {MIN_SPHERE_POINTS}, got {resolution}")
    k = np.arange(n, dtype=float)
    z = 1.0 - 2.0 * k / (n - 1)
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = GOLDEN_ANGLE * k
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def lhs_bound_closed(eta, strategy):
    """Closed-form work ceiling for hidden-state models at thermal bias eta."""
    if not -1.0 <= eta <= 1.0:
        raise InvalidParamError(f"eta must lie in [-1, 1], got {eta}")
    c1, c2, c3 = engine.check_strategy(strategy)
    root = np.sqrt(c1 * c1 + (c2 * c2 + c3 * c3) * (1.0 - eta * eta))
    return float(0.5 * (eta + (c2 + c3) * eta * eta + root))


@dataclass(frozen=True)
class LhsEnsemble:
    """Optimal hidden-state mixture found by the oracle."""

    weights: np.ndarray
    vectors: np.ndarray


def _rotation_rows(eta):
    """Third row of the Bloch rotation of each feedback unitary.

    The engine's work gain on a known Bloch vector v under outcome unitary U
    is (v_z - (R v)_z) / 2 with R the rotation U induces; only R's z-row
    matters.
    """
    rows = []
    for index in (1, 2, 3):
        d = engine.make_decomposition(index, eta)
        rows.append((qmath.bloch_rotation_of(d.u_plus)[2], qmath.bloch_rotation_of(d.u_minus)[2]))
    return rows


def best_case_work(points, eta, strategy):
    """Strategy-averaged work when the announcer knows the hidden state.

    For each measurement setting the announcer declares whichever outcome
    applies the more favorable feedback unitary to the hidden state.
    """
    strategy = engine.check_strategy(strategy)
    points = np.asarray(points, dtype=float)
    total = np.zeros(len(points))
    for weight, (row_plus, row_minus) in zip(strategy, _rotation_rows(eta)):
        if weight == 0.0:
            continue
        gain_plus = (points[:, 2] - points @ row_plus) / 2.0
        gain_minus = (points[:, 2] - points @ row_minus) / 2.0
        total += weight * np.maximum(gain_plus, gain_minus)
    return total


def lhs_bound_oracle(eta, strategy, resolution=20000):
    """LP certificate for the hidden-state work ceiling.

    Maximizes the best-case work over mixtures of ``resolution`` sphere
    points whose average Bloch vector equals (0, 0, eta).  Returns
    (value, LhsEnsemble); the ensemble support has at most four points.
    """
    if not -1.0 <= eta <= 1.0:
        raise InvalidParamError(f"eta must lie in [-1, 1], got {eta}")
    points = sphere_points(resolution)
    objective = best_case_work(points, eta, strategy)
    constraints = np.vstack([points.T, np.ones(len(points))])
    targets = np.array([0.0, 0.0, eta, 1.0])
    value, x = simplex.solve_max(objective, constraints, targets)
    support = np.flatnonzero(x > SUPPORT_TOL)
    return value, LhsEnsemble(weights=x[support].copy(), vectors=points[support].copy())


def replay_ensemble(ensemble, eta, strategy):
    """Re-run the engine branch algebra on an explicit hidden-state mixture.

    Independent of the vectorized objective in ``best_case_work``: each
    hidden state goes through the actual feedback unitaries and the energy
    bookkeeping, with the announcer again picking the better outcome.
    """
    strategy = engine.check_strategy(strategy)
    decomps = [engine.make_decomposition(i, eta) for i in (1, 2, 3)]
    total = 0.0
    for weight, vector in zip(ensemble.weights, ensemble.vectors):
        hidden = qmath.state_of(vector)
        e_start = engine.energy(hidden)
        contribution = 0.0
        for share, d in zip(strategy, decomps):
            if share == 0.0:
                continue
            w_plus = e_start - engine.energy(d.u_plus @ hidden @ qmath.dagger(d.u_plus))
            w_minus = e_start - engine.energy(d.u_minus @ hidden @ qmath.dagger(d.u_minus))
            contribution += share * max(w_plus, w_minus)
        total += weight * contribution
    return float(total)


def violation(rho, strategy):
    """Extracted work minus the classical ceiling at the state's bias."""
    eta = states.effective_eta(rho)
    return engine.average_work(rho, strategy) - lhs_bound_closed(eta, strategy)


def violation_boundary(family, eta, strategy, tol=BOUNDARY_TOL):
    """Mixing weight q* where the work violation changes sign, or None.

    Bisects on q in [0, 1] for the given two-parameter family.  Returns None
    when the violation does not cross zero on the interval.
    """
    if family not in ("gibbs-invariant", "werner"):
        raise InvalidParamError(f"no mixing-weight boundary for family {family!r}")
    if not -1.0 < eta < 1.0:
        raise InvalidParamError(f"boundary search needs |eta| < 1, got {eta}")
    if not 0.0 < tol < 1.0:
        raise InvalidParamError(f"tol must lie in (0, 1), got {tol}")

    def excess(q):
        return violation(states.make_state(family, eta, q), strategy)

    lo, hi = 0.0, 1.0
    if excess(lo) > BOUNDARY_SIGN_TOL or excess(hi) <= BOUNDARY_SIGN_TOL:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
