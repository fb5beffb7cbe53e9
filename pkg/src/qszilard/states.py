"""Factories for the bath-medium state families, parameterized by (eta, q).

All four families share the same structure: a thermal working medium whose
excited-state weight is set by ``eta``, correlated with the bath qubit in
four different ways.  ``q`` interpolates between a fully quantum and a fully
classical (or fully mixed) global state.
"""

from __future__ import annotations

import numpy as np

from . import qmath
from .errors import InvalidParamError, NonDiagonalReducedError

DIAGONAL_TOL = 1e-9


def eta_from_beta(beta):
    """Thermal parameter eta = (e^-beta - 1)/(e^-beta + 1); eta(0)=0, eta->-1 for beta->inf."""
    x = np.exp(-float(beta))
    return (x - 1.0) / (x + 1.0)


def _check_eta(eta):
    eta = float(eta)
    if abs(eta) > 1.0:
        raise InvalidParamError(f"eta = {eta} outside [-1, 1]")
    return eta


def _check_q(q):
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise InvalidParamError(f"q = {q} outside [0, 1]")
    return q


def gibbs(eta):
    """Thermal single-qubit state diag((1-eta)/2, (1+eta)/2)."""
    eta = _check_eta(eta)
    return np.diag([(1.0 - eta) / 2.0, (1.0 + eta) / 2.0]).astype(complex)


def pure_entangled(eta):
    """Rank-1 projector onto sqrt((1+eta)/2)|11> + sqrt((1-eta)/2)|00>."""
    eta = _check_eta(eta)
    psi = np.zeros(4, dtype=complex)
    psi[0] = np.sqrt((1.0 - eta) / 2.0)
    psi[3] = np.sqrt((1.0 + eta) / 2.0)
    return np.outer(psi, psi.conj())


def classical_correlated(eta):
    """Classically correlated mixture of |00><00| and |11><11| with thermal weights."""
    eta = _check_eta(eta)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (1.0 - eta) / 2.0
    rho[3, 3] = (1.0 + eta) / 2.0
    return rho


def gibbs_invariant(eta, q):
    """Mixture q * pure_entangled + (1-q) * classical_correlated.

    The medium's reduced state is gibbs(eta) for every q.
    """
    q = _check_q(q)
    return q * pure_entangled(eta) + (1.0 - q) * classical_correlated(eta)


def werner(eta, q):
    """Werner-type mixture q * pure_entangled + (1-q)/4 * identity.

    The medium's reduced state is gibbs(q * eta), not gibbs(eta).
    """
    q = _check_q(q)
    return q * pure_entangled(eta) + (1.0 - q) / 4.0 * qmath.I4


FAMILIES = ("pure-entangled", "classical-correlated", "gibbs-invariant", "werner")


def make_state(family, eta, q=1.0):
    """Dispatch on a family name; q is ignored by the two q-independent families."""
    if family == "pure-entangled":
        return pure_entangled(eta)
    if family == "classical-correlated":
        return classical_correlated(eta)
    if family == "gibbs-invariant":
        return gibbs_invariant(eta, q)
    if family == "werner":
        return werner(eta, q)
    raise InvalidParamError(f"unknown family {family!r}; choose one of {FAMILIES}")


def effective_eta(rho):
    """Bloch z component of the medium's reduced state.

    This is the thermal parameter seen locally by the medium, and the one all
    decompositions and work bounds must be evaluated at.  Raises
    NonDiagonalReducedError if the reduced state carries transverse Bloch
    components above tolerance (it never does for the four families here).
    """
    reduced = qmath.partial_trace_bath(rho)
    v = qmath.bloch_of(reduced)
    if max(abs(v[0]), abs(v[1])) > DIAGONAL_TOL:
        raise NonDiagonalReducedError(
            f"reduced medium state is not diagonal: transverse Bloch components ({v[0]:.3e}, {v[1]:.3e})"
        )
    return float(v[2])
