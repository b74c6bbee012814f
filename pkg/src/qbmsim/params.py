"""Physical parameter containers.

Units: hbar = 1 and all rates are angular frequencies.  The package works
in dimensionless form by setting the system frequency omega0 = 1, so times
are reported as omega0*t and temperatures as the ratio kT = k_B T / omega0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OscillatorSpec:
    """System harmonic oscillator.

    Parameters
    ----------
    omega0 : float
        Angular frequency of the system oscillator (inverse time).
    """

    omega0: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")


@dataclass(frozen=True)
class BathSpec:
    """Ohmic reservoir with a Lorentz-Drude cutoff.

    Spectral density J(w) = (2 w / pi) * wc^2 / (wc^2 + w^2).

    Parameters
    ----------
    omega_c : float
        Cutoff frequency (inverse time).
    g : float
        Dimensionless system-reservoir coupling constant.
    kT : float
        Thermal energy as the dimensionless ratio k_B T / omega0.
    """

    omega_c: float
    g: float
    kT: float

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        if not self.g > 0:
            raise ValueError(f"g must be > 0, got {self.g}")
        if not self.kT > 0:
            raise ValueError(f"kT must be > 0, got {self.kT}")

    def resonance_ratio(self, osc: OscillatorSpec) -> float:
        """Ratio r = omega_c / omega0.

        r >> 1: the oscillator sits inside the reservoir spectrum
        ("resonant"); r << 1: it lies outside ("off-resonant").
        """
        return self.omega_c / osc.omega0

    @classmethod
    def from_ratio(cls, r: float, g: float, kT: float,
                   osc: OscillatorSpec | None = None) -> "BathSpec":
        """Build a bath from the resonance ratio r = omega_c / omega0."""
        omega0 = osc.omega0 if osc is not None else 1.0
        return cls(omega_c=r * omega0, g=g, kT=kT)


def spectral_density_ohmic(omega, bath: BathSpec):
    """Ohmic Lorentz-Drude spectral density J(w); accepts arrays."""
    omega = np.asarray(omega, dtype=float)
    return (2.0 * omega / np.pi) * bath.omega_c**2 / (bath.omega_c**2 + omega**2)
