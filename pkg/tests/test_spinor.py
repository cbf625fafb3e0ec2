import math

import numpy as np
import pytest

from stocbeam import (
    DomainError,
    RotationSpec,
    conjugate_by,
    rotation_operator,
    spinor,
    unpolarized_density,
)
from stocbeam.spinor import SIGMA_Z, longitudinal_polarisation


def test_zero_rotation_is_identity():
    for theta, phi in [(0.3, 0.0), (math.pi / 2, 1.0), (2.0, 5.0)]:
        r = rotation_operator(RotationSpec(0.0, theta), phi)
        np.testing.assert_allclose(r, np.eye(2), atol=1e-15)


def test_pi_rotation_equatorial_axis():
    r = rotation_operator(RotationSpec(math.pi, math.pi / 2, 0.0), 0.0)
    expected = np.array([[0.0, -1j], [-1j, 0.0]])
    np.testing.assert_allclose(r, expected, atol=1e-15)


def test_unitarity_single_case():
    r = rotation_operator(RotationSpec(0.7, 1.1, 0.3), 2.0)
    np.testing.assert_allclose(r @ r.conj().T, np.eye(2), atol=1e-14)


def test_unitarity_and_determinant_random_sweep():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        alpha, phi0, phi = rng.uniform(0, 2 * math.pi, 3)
        theta = rng.uniform(0, math.pi)
        r = rotation_operator(RotationSpec(alpha, theta, phi0), phi)
        assert np.max(np.abs(r @ r.conj().T - np.eye(2))) < 1e-12
        assert abs(np.linalg.det(r) - 1.0) < 1e-12


def test_composition_same_axis():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a1, a2 = rng.uniform(0, math.pi, 2)
        theta = rng.uniform(0, math.pi)
        phi0 = rng.uniform(0, 2 * math.pi)
        phi = rng.uniform(0, 2 * math.pi)
        spec1 = RotationSpec(a1, theta, phi0)
        spec2 = RotationSpec(a2, theta, phi0)
        spec12 = RotationSpec(a1 + a2, theta, phi0)
        lhs = rotation_operator(spec1, phi) @ rotation_operator(spec2, phi)
        rhs = rotation_operator(spec12, phi)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_rotation_spec_theta_range():
    with pytest.raises(DomainError):
        RotationSpec(0.5, theta=-0.1)
    with pytest.raises(DomainError):
        RotationSpec(0.5, theta=math.pi + 0.1)


def test_unpolarized_density():
    rho = unpolarized_density()
    np.testing.assert_allclose(rho, 0.5 * np.eye(2), atol=0)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert longitudinal_polarisation(rho) == 0.0


def test_conjugate_by_identity():
    rho = np.array([[0.7, 0.1 + 0.2j], [0.1 - 0.2j, 0.3]])
    np.testing.assert_allclose(conjugate_by(np.eye(2), rho), rho, atol=1e-15)


def test_conjugate_by_unitary_preserves_maximally_mixed():
    u = rotation_operator(RotationSpec(1.234, 0.9, 0.4), 2.2)
    np.testing.assert_allclose(
        conjugate_by(u, unpolarized_density()), 0.5 * np.eye(2), atol=1e-14
    )


def _random_psd(rng):
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return g @ g.conj().T


def test_conjugate_by_preserves_hermiticity_and_psd():
    rng = np.random.default_rng(11)
    for _ in range(500):
        rho = _random_psd(rng)
        t = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        out = conjugate_by(t, rho)
        assert np.max(np.abs(out - out.conj().T)) < 1e-12
        assert min(np.linalg.eigvalsh(out)) > -1e-12
        assert np.trace(out).real >= -1e-12


def test_conjugate_by_trace_cyclic_property():
    rng = np.random.default_rng(13)
    for _ in range(200):
        rho = _random_psd(rng)
        t = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        lhs = np.trace(conjugate_by(t, rho))
        rhs = np.trace(rho @ t.conj().T @ t)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_spinor_normalization_helper():
    w = spinor(1.0, 1.0j) / math.sqrt(2)
    assert abs(np.vdot(w, w).real - 1.0) < 1e-12


def test_sigma_z_expectation_signs():
    up = np.array([[1.0, 0.0], [0.0, 0.0]])
    down = np.array([[0.0, 0.0], [0.0, 1.0]])
    assert longitudinal_polarisation(up) == 1.0
    assert longitudinal_polarisation(down) == -1.0
    assert np.trace(up @ SIGMA_Z).real == 1.0
