"""Spin-to-orbital conversion of electron Bessel beams in a magnetic round lens.

Models the intrinsic spin polarisation a unit-charge electron vortex
beam acquires when a magnetic objective lens couples its spin to the
spatial degree of freedom, and derives the detector-level observables:
spin densities, longitudinal polarisation, detection efficiency and
figure of merit.
"""

__version__ = "0.1.0"

from .beamline import (
    AnnularAperture,
    BeamParams,
    ConvergenceSpec,
    DetectorDisk,
    lateral_wavenumber,
    wavenumber_from_voltage,
)
from .errors import ConfigError, DomainError, ModeError, QuadratureError
from .polarimetry import (
    AnnularBeamModel,
    PolarimetryResult,
    RadialProfile,
    SpinDensities,
    SweepTable,
    detection_efficiency,
    differential_polarisation,
    figure_of_merit,
    integrated_polarisation,
    peak_figure_of_merit,
    spin_densities,
    sweep,
)
from .spinor import (
    SPIN_DOWN,
    SPIN_UP,
    RotationSpec,
    conjugate_by,
    rotation_operator,
    spinor,
    unpolarized_density,
)
from .transfer import (
    annular_field,
    bessel_j,
    evolve_pure,
    expectation_angular_momenta,
    fourier_oracle,
    transfer_matrix,
)

__all__ = [
    "AnnularAperture",
    "AnnularBeamModel",
    "BeamParams",
    "ConfigError",
    "ConvergenceSpec",
    "DetectorDisk",
    "DomainError",
    "ModeError",
    "PolarimetryResult",
    "QuadratureError",
    "RadialProfile",
    "RotationSpec",
    "SPIN_DOWN",
    "SPIN_UP",
    "SpinDensities",
    "SweepTable",
    "annular_field",
    "bessel_j",
    "conjugate_by",
    "detection_efficiency",
    "differential_polarisation",
    "evolve_pure",
    "expectation_angular_momenta",
    "figure_of_merit",
    "fourier_oracle",
    "integrated_polarisation",
    "lateral_wavenumber",
    "peak_figure_of_merit",
    "rotation_operator",
    "spin_densities",
    "spinor",
    "sweep",
    "transfer_matrix",
    "unpolarized_density",
    "wavenumber_from_voltage",
]
