"""Parameter containers and the derived constants of the cavity system."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

from scipy.constants import c as SPEED_OF_LIGHT
from scipy.constants import hbar as HBAR

from ..errors import NonPositiveParameter

__all__ = [
    "HBAR",
    "SPEED_OF_LIGHT",
    "PhysicalParams",
    "FixedEffective",
    "BareDetuning",
    "DriveParams",
    "DerivedConstants",
    "derive_constants",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Hardware constants. All frequencies are angular [rad/s].

    ``mech_damping`` may be zero (infinite Q); a warning is emitted in that case.
    """

    cavity_length: float
    pump_wavelength: float
    mirror_mass: float
    cavity_halfwidth: float
    mech_freq: float
    mech_damping: float

    def __post_init__(self):
        for name in ("cavity_length", "pump_wavelength", "mirror_mass",
                     "cavity_halfwidth", "mech_freq"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveParameter(name, value)
        if not (math.isfinite(self.mech_damping) and self.mech_damping >= 0):
            raise NonPositiveParameter("mech_damping", self.mech_damping)
        if self.mech_damping == 0:
            warnings.warn("mech_damping = 0: mechanical Q is infinite", stacklevel=3)
        elif self.quality_factor <= 1:
            raise ValueError(f"quality factor must exceed 1, got {self.quality_factor:g}")

    @property
    def quality_factor(self) -> float:
        if self.mech_damping == 0:
            return math.inf
        return self.mech_freq / self.mech_damping

    @property
    def sideband_resolution(self) -> float:
        """omega_m / kappa; much larger than one in the resolved-sideband limit."""
        return self.mech_freq / self.cavity_halfwidth


@dataclass(frozen=True)
class FixedEffective:
    """Effective detuning taken as given [rad/s]."""

    value: float


@dataclass(frozen=True)
class BareDetuning:
    """Bare detuning omega_0 - omega_c [rad/s]; effective detuning solved self-consistently."""

    value: float


DetuningMode = Union[FixedEffective, BareDetuning]


@dataclass(frozen=True)
class DriveParams:
    pump_power: float
    detuning: DetuningMode
    probe_offset: float = 0.0
    pump_phase: float = 0.0
    probe_power: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.pump_power) and self.pump_power >= 0):
            raise ValueError(f"pump_power must be >= 0, got {self.pump_power!r}")
        if not (math.isfinite(self.probe_power) and self.probe_power >= 0):
            raise ValueError(f"probe_power must be >= 0, got {self.probe_power!r}")
        if not math.isfinite(self.probe_offset):
            raise ValueError(f"probe_offset must be finite, got {self.probe_offset!r}")
        if not isinstance(self.detuning, (FixedEffective, BareDetuning)):
            raise TypeError("detuning must be FixedEffective or BareDetuning")
        if not math.isfinite(self.detuning.value):
            raise ValueError("detuning must be finite")


@dataclass(frozen=True)
class DerivedConstants:
    """Carrier frequency, radiation-pressure coupling and pump amplitude.

    ``pump_amplitude`` is the modulus |eps_c| [s^-1/2]; ``pump_phase`` its argument.
    ``coupling`` may be replaced (e.g. set to zero) with ``dataclasses.replace``.
    """

    cavity_freq: float
    coupling: float
    pump_amplitude: float
    pump_phase: float = 0.0
    probe_amplitude: float = field(default=0.0)

    @property
    def pump_field(self) -> complex:
        return self.pump_amplitude * complex(math.cos(self.pump_phase), math.sin(self.pump_phase))


def derive_constants(p: PhysicalParams, d: DriveParams) -> DerivedConstants:
    """Carrier frequency 2 pi c / lambda, coupling hbar omega_0 / L and drive amplitudes.

    The carrier frequency stands in for both omega_0 and omega_c; their difference is
    a MHz detuning against ~1e15 rad/s.
    """
    omega0 = 2.0 * math.pi * SPEED_OF_LIGHT / p.pump_wavelength
    chi0 = HBAR * omega0 / p.cavity_length
    eps_c = math.sqrt(2.0 * p.cavity_halfwidth * d.pump_power / (HBAR * omega0))
    eps_p = math.sqrt(2.0 * p.cavity_halfwidth * d.probe_power / (HBAR * omega0))
    return DerivedConstants(
        cavity_freq=omega0,
        coupling=chi0,
        pump_amplitude=eps_c,
        pump_phase=d.pump_phase,
        probe_amplitude=eps_p,
    )
