"""Measurement-feedback work extraction on the bath-medium pair.

One engine cycle: Alice measures the bath qubit along the axis of a
decomposition D_i, announces the outcome, and Bob applies the matching
conditional unitary to the working medium.  Work is the two-point energy
difference of the medium, with internal energy operator |1><1| (level
splitting = 1).

Each decomposition D_i resolves the medium's thermal state into two pure
states with Bloch vectors n_i^+/n_i^-, paired with unitaries that rotate
those vectors to the ground state:

    n1 = (0, 0, +/-1)                  measured axis z
    n2 = (0, -/+sqrt(1-eta^2), eta)    measured axis y
    n3 = (+/-sqrt(1-eta^2), 0, eta)    measured axis x

U1+ is a bit flip and U1- the identity; U2 (U3) are rotations about the
+/-x (+/-y) axis by alpha = 2*arctan(sqrt((1+eta)/(1-eta))), for which
cos(alpha) = -eta and sin(alpha) = sqrt(1-eta^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath, states
from .errors import DecompositionMismatchError, InvalidParamError, InvalidStrategyError

ENERGY_OPERATOR = np.diag([0.0, 1.0]).astype(complex)

ETA_MATCH_TOL = 1e-9
ZERO_BRANCH_TOL = 1e-12
STRATEGY_TOL = 1e-9
GROUND = np.array([0.0, 0.0, -1.0])


def energy(rho):
    """Internal energy Tr(rho |1><1|) of a single-qubit state; (1+vz)/2."""
    return float(rho[1, 1].real)


def alpha_angle(eta):
    """Feedback rotation angle; atan2 form stays finite at eta = +/-1."""
    return 2.0 * np.arctan2(np.sqrt(1.0 + eta), np.sqrt(1.0 - eta))


def decomposition_vectors(index, eta):
    """Target Bloch vector pair (n_plus, n_minus) of decomposition D_index."""
    s = np.sqrt(max(1.0 - eta * eta, 0.0))
    if index == 1:
        return np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])
    if index == 2:
        return np.array([0.0, -s, eta]), np.array([0.0, s, eta])
    if index == 3:
        return np.array([s, 0.0, eta]), np.array([-s, 0.0, eta])
    raise InvalidParamError(f"decomposition index {index} not in {{1, 2, 3}}")


@dataclass(frozen=True)
class Decomposition:
    """Bath measurement plus the pair of conditional work-extraction unitaries."""

    index: int
    eta: float
    axis: str  # bath measurement axis label
    proj_plus: np.ndarray  # 2x2 bath projector announced as "+"
    proj_minus: np.ndarray
    u_plus: np.ndarray  # 2x2 medium unitary applied on "+"
    u_minus: np.ndarray
    n_plus: np.ndarray  # Bloch vectors resolved by the measurement
    n_minus: np.ndarray


@dataclass(frozen=True)
class EngineRun:
    """One protocol evaluation: branch probabilities, post states, works."""

    p_plus: float
    p_minus: float
    post_plus: np.ndarray | None  # conditional medium state after extraction
    post_minus: np.ndarray | None
    w_plus: float
    w_minus: float
    average: float


def reduce_medium(rho):
    # partial trace over the bath without density validation (subnormalized inputs)
    return np.einsum("imin->mn", rho.reshape(2, 2, 2, 2))


def _steered_bloch(rho_pair, proj):
    weight = qmath.expectation(rho_pair, qmath.tensor(proj, qmath.I2))
    sandwich = qmath.tensor(proj, qmath.I2) @ rho_pair @ qmath.tensor(proj, qmath.I2)
    return qmath.bloch_of(reduce_medium(sandwich) / weight)


def make_decomposition(index, eta):
    """Build D_index at thermal parameter eta (endpoints handled as limits)."""
    eta = float(eta)
    if abs(eta) > 1.0:
        raise InvalidParamError(f"eta = {eta} outside [-1, 1]")
    n_plus, n_minus = decomposition_vectors(index, eta)
    alpha = alpha_angle(eta)
    if index == 1:
        axis = "z"
        u_plus, u_minus = qmath.SX.copy(), qmath.I2.copy()
    elif index == 2:
        axis = "y"
        u_plus = qmath.rotation_unitary([1.0, 0.0, 0.0], alpha)
        u_minus = qmath.rotation_unitary([-1.0, 0.0, 0.0], alpha)
    else:
        axis = "x"
        u_plus = qmath.rotation_unitary([0.0, 1.0, 0.0], alpha)
        u_minus = qmath.rotation_unitary([0.0, -1.0, 0.0], alpha)
    sigma = qmath.PAULIS[axis]
    proj_plus = (qmath.I2 + sigma) / 2.0
    proj_minus = (qmath.I2 - sigma) / 2.0
    # Outcome labeling is operational: "+" must be the bath projector whose
    # outcome steers the medium toward n_plus on the pure entangled state.
    if abs(eta) < 1.0 - 1e-12:
        steered = _steered_bloch(states.pure_entangled(eta), proj_plus)
        if np.linalg.norm(steered - n_plus) > np.linalg.norm(steered - n_minus):
            proj_plus, proj_minus = proj_minus, proj_plus
    return Decomposition(index, eta, axis, proj_plus, proj_minus, u_plus, u_minus, n_plus, n_minus)


def _check_match(d, eta_state):
    if abs(d.eta - eta_state) > ETA_MATCH_TOL:
        raise DecompositionMismatchError(
            f"decomposition built at eta={d.eta!r} but state has effective eta={eta_state!r}"
        )


def run_protocol(rho, d):
    """Measure, feed back, and account work for one decomposition."""
    rho = qmath.validate_density(np.asarray(rho, dtype=complex))
    eta_state = states.effective_eta(rho)
    _check_match(d, eta_state)
    e_init = energy(qmath.partial_trace_bath(rho))

    probs, posts, works = [], [], []
    for proj, u in ((d.proj_plus, d.u_plus), (d.proj_minus, d.u_minus)):
        big = qmath.tensor(proj, qmath.I2)
        p = qmath.expectation(rho, big)
        if p < ZERO_BRANCH_TOL:
            probs.append(0.0)
            posts.append(None)
            works.append(0.0)
            continue
        conditional = reduce_medium(big @ rho @ big) / p
        post = u @ conditional @ qmath.dagger(u)
        probs.append(p)
        posts.append(post)
        works.append(e_init - energy(post))
    average = probs[0] * works[0] + probs[1] * works[1]
    return EngineRun(probs[0], probs[1], posts[0], posts[1], works[0], works[1], average)


def run_protocol_deferred(rho, d):
    """Same cycle via the circuit route: basis rotation, bath dephasing, CROT.

    Deferred-measurement equivalence makes the averages identical to
    run_protocol's up to rounding.
    """
    rho = qmath.validate_density(np.asarray(rho, dtype=complex))
    eta_state = states.effective_eta(rho)
    _check_match(d, eta_state)
    e_init = energy(qmath.partial_trace_bath(rho))

    # Bath rotation mapping the "+" measurement eigenvector onto |0>.
    eigvals, eigvecs = np.linalg.eigh(d.proj_plus)
    e_plus = eigvecs[:, np.argmax(eigvals)]
    e_minus = eigvecs[:, np.argmin(eigvals)]
    v = np.vstack([e_plus.conj(), e_minus.conj()])

    rotated = qmath.tensor(v, qmath.I2) @ rho @ qmath.dagger(qmath.tensor(v, qmath.I2))
    dephased = np.zeros_like(rotated)
    dephased[0:2, 0:2] = rotated[0:2, 0:2]
    dephased[2:4, 2:4] = rotated[2:4, 2:4]
    crot = np.zeros((4, 4), dtype=complex)
    crot[0:2, 0:2] = d.u_plus
    crot[2:4, 2:4] = d.u_minus
    final = crot @ dephased @ qmath.dagger(crot)

    probs, posts, works = [], [], []
    for block in (final[0:2, 0:2], final[2:4, 2:4]):
        p = float(np.trace(block).real)
        if p < ZERO_BRANCH_TOL:
            probs.append(0.0)
            posts.append(None)
            works.append(0.0)
            continue
        post = block / p
        probs.append(p)
        posts.append(post)
        works.append(e_init - energy(post))
    average = probs[0] * works[0] + probs[1] * works[1]
    return EngineRun(probs[0], probs[1], posts[0], posts[1], works[0], works[1], average)


def check_strategy(strategy):
    """Validate (c1, c2, c3): nonnegative, summing to one."""
    c = np.asarray(strategy, dtype=float)
    if c.shape != (3,):
        raise InvalidStrategyError(f"strategy must have three weights, got {strategy!r}")
    if np.any(c < -STRATEGY_TOL):
        raise InvalidStrategyError(f"negative strategy weight in {strategy!r}")
    if abs(c.sum() - 1.0) > STRATEGY_TOL:
        raise InvalidStrategyError(f"strategy weights sum to {float(c.sum())!r}, expected 1")
    return np.clip(c, 0.0, None)


def average_work(rho, strategy):
    """Strategy-averaged extracted work: sum_i c_i W(rho, D_i)."""
    c = check_strategy(strategy)
    rho = qmath.validate_density(np.asarray(rho, dtype=complex))
    eta_state = states.effective_eta(rho)
    total = 0.0
    for i in (1, 2, 3):
        if c[i - 1] == 0.0:
            continue
        total += c[i - 1] * run_protocol(rho, make_decomposition(i, eta_state)).average
    return total
