import math

import numpy as np
import pytest

from stocbeam import (
    AnnularAperture,
    BeamParams,
    ConvergenceSpec,
    DetectorDisk,
    DomainError,
    lateral_wavenumber,
    wavenumber_from_voltage,
)

# Independent oracle values, frozen from p = sqrt(T^2 + 2 T m c^2)/c with
# T = eU (CODATA 2018), k = p/hbar. Cross-checked against published
# electron wavelength tables (lambda(200 kV) = 2.508 pm).
ORACLE_K = {
    200000.0: 2505.323185490241,  # nm^-1
    20000.0: 731.5802114424548,
    2000.0: 229.33907728820566,
    200.0: 72.45961464899207,
}


@pytest.mark.parametrize("voltage,expected", sorted(ORACLE_K.items()))
def test_wavenumber_matches_energy_momentum_oracle(voltage, expected):
    assert wavenumber_from_voltage(voltage) == pytest.approx(expected, rel=1e-9)


def test_200kv_wavelength_published_value():
    k = wavenumber_from_voltage(200000.0)
    assert k == pytest.approx(2.505e3, rel=1e-3)
    assert 2 * math.pi / k == pytest.approx(2.508e-3, rel=1e-3)


def test_200v_wavelength():
    k = wavenumber_from_voltage(200.0)
    assert 2 * math.pi / k == pytest.approx(0.0867, rel=1e-3)
    assert k == pytest.approx(2 * math.pi / 0.0867, rel=1e-3)


def test_wavenumber_monotone_in_voltage():
    voltages = np.geomspace(1.0, 1e6, 200)
    ks = [wavenumber_from_voltage(v) for v in voltages]
    assert all(a < b for a, b in zip(ks, ks[1:]))
    assert wavenumber_from_voltage(20e3) < wavenumber_from_voltage(200e3)


def test_nonrelativistic_limit_low_voltage():
    from scipy import constants

    for u in (0.1, 1.0, 10.0):
        k_nr = math.sqrt(2 * constants.m_e * constants.e * u) / constants.hbar * 1e-9
        assert wavenumber_from_voltage(u) == pytest.approx(k_nr, rel=1e-5)


@pytest.mark.parametrize("bad", [0.0, -5.0, float("nan"), float("inf")])
def test_wavenumber_rejects_bad_voltage(bad):
    with pytest.raises(DomainError):
        wavenumber_from_voltage(bad)


def test_beam_params_invariants():
    beam = BeamParams(20000.0)
    assert beam.wavelength == pytest.approx(2 * math.pi / beam.wavenumber, rel=1e-14)
    assert beam.lorentz_gamma > 1.0
    with pytest.raises(DomainError):
        BeamParams(-1.0)


def test_lateral_wavenumber_examples():
    beam = BeamParams(200000.0)
    assert lateral_wavenumber(beam, 0.0) == 0.0
    assert lateral_wavenumber(beam, 0.05) == pytest.approx(125.2, rel=1e-3)


def test_lateral_wavenumber_paraxial_limit():
    beam = BeamParams(20000.0)
    alpha = 1e-3
    assert lateral_wavenumber(beam, alpha) / beam.wavenumber == pytest.approx(
        alpha, rel=1e-6
    )


def test_lateral_wavenumber_bounded_by_k():
    beam = BeamParams(300.0)
    for alpha in np.linspace(0.0, math.pi / 2 - 1e-9, 50):
        assert lateral_wavenumber(beam, alpha) <= beam.wavenumber


def test_lateral_wavenumber_domain():
    beam = BeamParams(300.0)
    with pytest.raises(DomainError):
        lateral_wavenumber(beam, -0.1)
    with pytest.raises(DomainError):
        lateral_wavenumber(beam, math.pi / 2)


def test_convergence_spec_range():
    ConvergenceSpec(0.0)
    ConvergenceSpec(1.5)
    with pytest.raises(DomainError):
        ConvergenceSpec(math.pi / 2)
    with pytest.raises(DomainError):
        ConvergenceSpec(-0.01)


def test_annular_aperture_invariants():
    AnnularAperture(8e-3, 12e-3)
    with pytest.raises(DomainError):
        AnnularAperture(12e-3, 8e-3)
    with pytest.raises(DomainError):
        AnnularAperture(8e-3, 8e-3)  # degenerate ring: single-Q territory
    with pytest.raises(DomainError):
        AnnularAperture(8e-3, 12e-3, n_samples=1)


def test_detector_disk_invariants():
    DetectorDisk(0.25)
    with pytest.raises(DomainError):
        DetectorDisk(0.0)
    with pytest.raises(DomainError):
        DetectorDisk(0.25, n_radial=8)
