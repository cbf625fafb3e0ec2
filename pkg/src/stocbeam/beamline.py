"""Electron beam, aperture and detector parameters.

Converts laboratory settings (accelerating voltage, convergence angles,
detector radii) into the quantities the wave-optics core consumes.
Units are fixed throughout the package: nm for lengths, nm^-1 for
wavenumbers, radians for angles, volts for voltage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import constants

from .errors import DomainError

_HBAR = constants.hbar
_M_E = constants.m_e
_E = constants.e
_C = constants.c


def wavenumber_from_voltage(voltage: float) -> float:
    """Relativistic electron wavenumber k in nm^-1 for an accelerating voltage.

    Uses k = sqrt(2 m0 e U (1 + e U / 2 m0 c^2)) / hbar with CODATA constants.
    """
    if not (math.isfinite(voltage) and voltage > 0):
        raise DomainError(f"voltage must be positive and finite, got {voltage!r}")
    p = math.sqrt(2.0 * _M_E * _E * voltage * (1.0 + _E * voltage / (2.0 * _M_E * _C**2)))
    return p / _HBAR * 1e-9


@dataclass(frozen=True)
class BeamParams:
    """Accelerating voltage and the derived relativistic beam quantities."""

    voltage: float
    wavenumber: float = field(init=False)
    wavelength: float = field(init=False)
    lorentz_gamma: float = field(init=False)

    def __post_init__(self):
        k = wavenumber_from_voltage(self.voltage)
        object.__setattr__(self, "wavenumber", k)
        object.__setattr__(self, "wavelength", 2.0 * math.pi / k)
        object.__setattr__(
            self, "lorentz_gamma", 1.0 + _E * self.voltage / (_M_E * _C**2)
        )


@dataclass(frozen=True)
class ConvergenceSpec:
    """Convergence half-angle at the observation plane.

    The same angle is the spinor rotation angle: for g = 2 the Larmor and
    cyclotron frequencies coincide, so the spin tracks the momentum tilt.
    """

    alpha: float

    def __post_init__(self):
        if not (0.0 <= self.alpha < math.pi / 2):
            raise DomainError(
                f"convergence angle must lie in [0, pi/2), got {self.alpha!r}"
            )


@dataclass(frozen=True)
class AnnularAperture:
    """Finite-width ring mask selecting convergence angles in [alpha_min, alpha_max]."""

    alpha_min: float
    alpha_max: float
    n_samples: int = 64

    def __post_init__(self):
        if not (0.0 <= self.alpha_min < self.alpha_max < math.pi / 2):
            raise DomainError(
                "aperture band must satisfy 0 <= alpha_min < alpha_max < pi/2, "
                f"got [{self.alpha_min!r}, {self.alpha_max!r}]"
            )
        if self.n_samples < 2:
            raise DomainError(f"n_samples must be >= 2, got {self.n_samples!r}")


@dataclass(frozen=True)
class DetectorDisk:
    """On-axis detector disk of radius ``radius`` nm."""

    radius: float
    n_radial: int = 64

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError(f"detector radius must be positive, got {self.radius!r}")
        if self.n_radial < 16:
            raise DomainError(f"n_radial must be >= 16, got {self.n_radial!r}")


def lateral_wavenumber(beam: BeamParams, alpha: float) -> float:
    """Lateral wavenumber Q = k sin(alpha) in nm^-1.

    The exact trigonometric relation is used rather than the paraxial
    Q = k alpha; the two agree to O(alpha^3).
    """
    if not (0.0 <= alpha < math.pi / 2):
        raise DomainError(f"alpha must lie in [0, pi/2), got {alpha!r}")
    return beam.wavenumber * math.sin(alpha)
