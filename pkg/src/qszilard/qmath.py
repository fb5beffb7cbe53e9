"""Dense complex algebra for one- and two-qubit operators.

Conventions used throughout the package:

* Computational basis order is (|0>, |1>) for a single qubit and
  (|00>, |01>, |10>, |11>) for the pair, with the *bath* qubit as the first
  tensor factor and the working medium as the second.
* The Bloch z component is the population difference vz = p(|1>) - p(|0>),
  so a thermal state with excited-state weight (1+eta)/2 sits at (0, 0, eta)
  and the ground state |0> sits at the south pole (0, 0, -1).  The Pauli
  triple below is chosen right-handed under that convention
  (SX @ SY == 1j * SZ), which keeps the usual rotation formulas valid:
  exp(-1j*angle/2 * n.sigma) rotates Bloch vectors right-handedly about n.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidBlochError, InvalidStateError

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

# Right-handed Pauli triple with SZ|1> = +|1> (see module docstring).
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SZ = np.array([[-1, 0], [0, 1]], dtype=complex)
PAULIS = {"x": SX, "y": SY, "z": SZ}

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
BLOCH_NORM_TOL = 1e-9


def tensor(a, b):
    """Kronecker product in bath (x) medium index order."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a):
    return np.conjugate(np.asarray(a)).T


def expectation(rho, op):
    """Real part of Tr(rho @ op); intended for Hermitian observables."""
    return float(np.trace(np.asarray(rho) @ np.asarray(op)).real)


def partial_trace_bath(rho):
    """Trace out the bath (first factor) of a 4x4 density matrix.

    Raises InvalidStateError if ``rho`` is not a valid density matrix.
    """
    rho = np.asarray(rho, dtype=complex)
    validate_density(rho)
    r = rho.reshape(2, 2, 2, 2)  # indices [bath, medium, bath', medium']
    return np.einsum("imin->mn", r)


def bloch_of(rho):
    """Bloch vector (vx, vy, vz) of a single-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    validate_density(rho)
    return np.array([expectation(rho, SX), expectation(rho, SY), expectation(rho, SZ)])


def state_of(v):
    """Density matrix (I + v . sigma) / 2 for a Bloch vector with |v| <= 1."""
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm > 1.0 + BLOCH_NORM_TOL:
        raise InvalidBlochError(f"Bloch vector has norm {norm:.6g} > 1")
    return (I2 + v[0] * SX + v[1] * SY + v[2] * SZ) / 2.0


def _min_eigenvalue_2x2(rho):
    # Closed form from the characteristic polynomial of a Hermitian 2x2.
    a = rho[0, 0].real
    d = rho[1, 1].real
    b = rho[0, 1]
    disc = np.sqrt(((a - d) / 2.0) ** 2 + abs(b) ** 2)
    return (a + d) / 2.0 - disc


def validate_density(rho):
    """Check hermiticity, unit trace and positivity; raise InvalidStateError naming
    the violated property otherwise."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape not in ((2, 2), (4, 4)):
        raise InvalidStateError(f"expected a 2x2 or 4x4 matrix, got shape {rho.shape}")
    herm_dev = float(np.abs(rho - dagger(rho)).max())
    if herm_dev > HERMITICITY_TOL:
        raise InvalidStateError(f"hermiticity violated: max |rho - rho^dag| = {herm_dev:.3e}")
    trace_dev = abs(complex(np.trace(rho)) - 1.0)
    if trace_dev > TRACE_TOL:
        raise InvalidStateError(f"trace violated: |Tr(rho) - 1| = {trace_dev:.3e}")
    if rho.shape == (2, 2):
        min_eig = _min_eigenvalue_2x2(rho)
    else:
        min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -POSITIVITY_TOL:
        raise InvalidStateError(f"positivity violated: min eigenvalue = {min_eig:.3e}")
    return rho


def rotation_unitary(axis, angle):
    """SU(2) rotation exp(-1j*angle/2 * n.sigma) about the (normalized) axis."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    generator = axis[0] * SX + axis[1] * SY + axis[2] * SZ
    return np.cos(angle / 2.0) * I2 - 1j * np.sin(angle / 2.0) * generator


def rotation_matrix(axis, angle):
    """SO(3) right-handed rotation about the (normalized) axis, Rodrigues form."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def bloch_rotation_of(u):
    """Extract the SO(3) action of a single-qubit unitary on Bloch vectors.

    Column k is the image of the k-th Bloch basis vector, computed directly
    from conjugation, so the result tracks the unitary exactly.
    """
    u = np.asarray(u, dtype=complex)
    r = np.empty((3, 3))
    for k, sigma in enumerate((SX, SY, SZ)):
        image = u @ sigma @ dagger(u)
        # Tr(sigma_j sigma_k) = 2 delta_jk, so the overlap coefficient is Tr/2.
        r[:, k] = [
            np.trace(image @ SX).real / 2.0,
            np.trace(image @ SY).real / 2.0,
            np.trace(image @ SZ).real / 2.0,
        ]
    return r
