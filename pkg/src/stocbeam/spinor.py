"""Pauli-spinor algebra: spinors, SU(2) rotations and spin density matrices.

Spinors are complex length-2 numpy arrays in the sigma_z eigenbasis
(components a_plus, a_minus); 2x2 complex numpy arrays serve as general
matrices and as Hermitian positive-semidefinite density matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SPIN_UP = np.array([1.0, 0.0], dtype=complex)
SPIN_DOWN = np.array([0.0, 1.0], dtype=complex)

IDENTITY = np.eye(2, dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def spinor(a_plus: complex, a_minus: complex) -> np.ndarray:
    """Build a spinor (a_plus, a_minus)^T."""
    return np.array([a_plus, a_minus], dtype=complex)


def normalize(w: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(w)
    if n == 0:
        raise DomainError("cannot normalize the zero spinor")
    return w / n


@dataclass(frozen=True)
class RotationSpec:
    """Rotation by ``alpha`` about the Bloch-sphere axis (theta, phi + phi0).

    The azimuth of the rotation axis follows the source azimuth phi up to
    the constant offset phi0, as dictated by the cylindrical symmetry of
    the lens field.
    """

    alpha: float
    theta: float = math.pi / 2
    phi0: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta!r}")


def axis_dot_sigma(theta: float, phi_prime: float) -> np.ndarray:
    """The matrix n.sigma for the unit axis with spherical angles (theta, phi')."""
    ct, st = math.cos(theta), math.sin(theta)
    e = np.exp(1j * phi_prime)
    return np.array([[ct, -1j * st / e], [-1j * st * e, -ct]], dtype=complex)


def rotation_operator(spec: RotationSpec, phi: float = 0.0) -> np.ndarray:
    """SU(2) spinor rotation exp(-i alpha/2 n.sigma) with axis azimuth phi + phi0.

    Expanded as cos(alpha/2) 1 - i sin(alpha/2) n.sigma; unitary with unit
    determinant.
    """
    c = math.cos(0.5 * spec.alpha)
    s = math.sin(0.5 * spec.alpha)
    ct, st = math.cos(spec.theta), math.sin(spec.theta)
    e = np.exp(1j * (phi + spec.phi0))
    return np.array(
        [
            [c - 1j * s * ct, -1j * s * st / e],
            [-1j * s * st * e, c + 1j * s * ct],
        ],
        dtype=complex,
    )


def unpolarized_density() -> np.ndarray:
    """Spin density matrix of a fully unpolarized beam: identity / 2."""
    return 0.5 * IDENTITY.copy()


def conjugate_by(t: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Propagate a density matrix through a transfer matrix: T rho T^dagger.

    The result is re-symmetrized to suppress rounding-level Hermiticity
    violations.
    """
    out = t @ rho @ t.conj().T
    return 0.5 * (out + out.conj().T)


def longitudinal_polarisation(rho: np.ndarray) -> float:
    """Tr(rho sigma_z) / Tr(rho) for a density matrix with positive trace."""
    tr = rho[0, 0].real + rho[1, 1].real
    if tr <= 0:
        raise DomainError("density matrix has non-positive trace")
    return (rho[0, 0].real - rho[1, 1].real) / tr
