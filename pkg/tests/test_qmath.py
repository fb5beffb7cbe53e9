import numpy as np
import pytest

from qszilard import qmath
from qszilard.errors import InvalidBlochError, InvalidStateError


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho)


def test_pauli_algebra():
    # right-handed triple: sx sy = i sz and cyclic
    assert np.allclose(qmath.SX @ qmath.SY, 1j * qmath.SZ)
    assert np.allclose(qmath.SY @ qmath.SZ, 1j * qmath.SX)
    assert np.allclose(qmath.SZ @ qmath.SX, 1j * qmath.SY)
    for s in (qmath.SX, qmath.SY, qmath.SZ):
        assert np.allclose(s @ s, np.eye(2))
        assert np.allclose(s, s.conj().T)
        assert abs(np.trace(s)) < 1e-15


def test_ground_state_bloch():
    # |0> sits at the south pole: energy readout vz = -1
    ket0 = np.array([1.0, 0.0])
    rho = np.outer(ket0, ket0)
    assert np.allclose(qmath.bloch_of(rho), [0.0, 0.0, -1.0])
    assert np.allclose(qmath.bloch_of(np.diag([0.0, 1.0])), [0.0, 0.0, 1.0])


def test_bloch_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        rho = qmath.state_of(v)
        qmath.validate_density(rho)
        assert np.allclose(qmath.bloch_of(rho), v, atol=1e-12)


def test_state_of_rejects_outside_ball():
    with pytest.raises(InvalidBlochError):
        qmath.state_of([0.8, 0.8, 0.8])


def test_partial_trace_bath():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = random_density(rng, 2)
        b = random_density(rng, 2)
        reduced = qmath.partial_trace_bath(qmath.tensor(a, b))
        assert np.allclose(reduced, b, atol=1e-12)
    # correlated state reduces to the uniform mixture
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    assert np.allclose(qmath.partial_trace_bath(np.outer(psi, psi)), np.eye(2) / 2)


def test_validate_density_rejections():
    with pytest.raises(InvalidStateError, match="hermiticity"):
        qmath.validate_density(np.array([[0.5, 0.5j], [0.5j, 0.5]]))
    with pytest.raises(InvalidStateError, match="trace"):
        qmath.validate_density(np.eye(2))
    with pytest.raises(InvalidStateError, match="positivity"):
        qmath.validate_density(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidStateError):
        qmath.validate_density(np.eye(3) / 3)


def test_rotation_unitary_matches_bloch_rotation():
    rng = np.random.default_rng(7)
    for _ in range(40):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(-2 * np.pi, 2 * np.pi)
        u = qmath.rotation_unitary(axis, angle)
        assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-12)
        r = qmath.bloch_rotation_of(u)
        assert np.allclose(r, qmath.rotation_matrix(axis, angle), atol=1e-12)
        v = rng.normal(size=3)
        v *= rng.uniform(0, 1) / np.linalg.norm(v)
        rotated = u @ qmath.state_of(v) @ u.conj().T
        assert np.allclose(qmath.bloch_of(rotated), r @ v, atol=1e-12)


def test_bloch_rotation_is_special_orthogonal():
    rng = np.random.default_rng(23)
    for _ in range(30):
        r = qmath.bloch_rotation_of(random_unitary(rng))
        assert np.allclose(r @ r.T, np.eye(3), atol=1e-10)
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-10)


def test_expectation_real():
    rng = np.random.default_rng(5)
    rho = random_density(rng, 2)
    val = qmath.expectation(rho, qmath.SY)
    assert isinstance(val, float)
    assert abs(val) <= 1 + 1e-12
