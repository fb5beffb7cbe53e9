import numpy as np
import pytest

from qszilard import qmath, states
from qszilard.errors import InvalidParamError, NonDiagonalReducedError

ETAS = [-1.0, -0.8, -0.3, 0.0, 0.4, 0.9, 1.0]


def test_eta_from_beta():
    assert states.eta_from_beta(0.0) == pytest.approx(0.0)
    # beta -> +inf freezes to the ground state
    assert states.eta_from_beta(50.0) == pytest.approx(-1.0, abs=1e-12)
    assert states.eta_from_beta(-50.0) == pytest.approx(1.0, abs=1e-12)
    beta = 0.7
    expect = (np.exp(-beta) - 1) / (np.exp(-beta) + 1)
    assert states.eta_from_beta(beta) == pytest.approx(expect, abs=1e-15)


@pytest.mark.parametrize("eta", ETAS)
def test_gibbs_populations(eta):
    g = states.gibbs(eta)
    assert np.allclose(g, np.diag([(1 - eta) / 2, (1 + eta) / 2]))
    assert np.allclose(qmath.bloch_of(g), [0, 0, eta])


@pytest.mark.parametrize("eta", ETAS)
def test_two_qubit_families_are_states(eta):
    for family in states.FAMILIES:
        rho = states.make_state(family, eta, 0.7)
        qmath.validate_density(rho)
        assert rho.shape == (4, 4)


@pytest.mark.parametrize("eta", ETAS)
def test_reduced_states_are_thermal(eta):
    # both halves of the pure state and its classical twin look Gibbs locally
    for family in ("pure-entangled", "classical-correlated"):
        rho = states.make_state(family, eta)
        assert np.allclose(qmath.partial_trace_bath(rho), states.gibbs(eta), atol=1e-12)
        bath = np.einsum("imjm->ij", rho.reshape(2, 2, 2, 2))
        assert np.allclose(bath, states.gibbs(eta), atol=1e-12)
        assert states.effective_eta(rho) == pytest.approx(eta, abs=1e-12)


def test_pure_entangled_is_pure():
    for eta in ETAS:
        rho = states.pure_entangled(eta)
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)
        # only the double-ground and double-excited entries are populated
        psi = np.array([np.sqrt((1 - eta) / 2), 0, 0, np.sqrt((1 + eta) / 2)])
        assert np.allclose(rho, np.outer(psi, psi), atol=1e-12)


def test_classical_twin_matches_pure_diagonal():
    for eta in ETAS:
        rho1 = states.pure_entangled(eta)
        rho2 = states.classical_correlated(eta)
        assert np.allclose(np.diag(np.diag(rho1)), rho2, atol=1e-12)


def test_mixture_families_interpolate():
    eta, q = 0.45, 0.3
    rho1 = states.pure_entangled(eta)
    gi = states.gibbs_invariant(eta, q)
    assert np.allclose(gi, q * rho1 + (1 - q) * states.classical_correlated(eta), atol=1e-12)
    w = states.werner(eta, q)
    assert np.allclose(w, q * rho1 + (1 - q) * np.eye(4) / 4, atol=1e-12)
    # endpoint checks
    assert np.allclose(states.werner(eta, 1.0), rho1)
    assert np.allclose(states.werner(eta, 0.0), np.eye(4) / 4)


def test_effective_eta_values():
    eta, q = 0.6, 0.35
    assert states.effective_eta(states.gibbs_invariant(eta, q)) == pytest.approx(eta, abs=1e-12)
    assert states.effective_eta(states.werner(eta, q)) == pytest.approx(q * eta, abs=1e-12)


def test_effective_eta_rejects_transverse():
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    rho = qmath.tensor(np.diag([1.0, 0.0]), np.outer(plus, plus))
    with pytest.raises(NonDiagonalReducedError):
        states.effective_eta(rho)


def test_parameter_validation():
    with pytest.raises(InvalidParamError):
        states.pure_entangled(1.2)
    with pytest.raises(InvalidParamError):
        states.werner(0.3, -0.1)
    with pytest.raises(InvalidParamError):
        states.gibbs_invariant(0.3, 1.5)
    with pytest.raises(InvalidParamError):
        states.make_state("thermal-pair", 0.1)
