"""Propagation constants of the poled coupler and the phase mismatch of each
eigenmode pair.

All internal quantities are SI with angular frequencies in rad/s. Wavelengths
only appear at the I/O boundary (see :func:`wavelength_to_omega`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact


def wavelength_to_omega(wavelength_m):
    """Vacuum wavelength (m) to angular frequency (rad/s)."""
    return 2.0 * np.pi * SPEED_OF_LIGHT / np.asarray(wavelength_m, dtype=float)


def omega_to_wavelength(omega):
    """Angular frequency (rad/s) to vacuum wavelength (m)."""
    return 2.0 * np.pi * SPEED_OF_LIGHT / np.asarray(omega, dtype=float)


class DomainError(ValueError):
    """Raised when a frequency outside the physical domain is requested."""


class EigenLabel(enum.Enum):
    """Symmetric and antisymmetric supermodes of the two-waveguide coupler."""

    S = "S"
    A = "A"

    @property
    def sign(self) -> int:
        # beta_S = beta0 - C, beta_A = beta0 + C
        return -1 if self is EigenLabel.S else 1


class Band(enum.Enum):
    PUMP = "pump"
    GENERATED = "generated"


@dataclass(frozen=True)
class BandPolynomial:
    """beta(omega) = sum_k c_k (omega - omega_ref)**k."""

    reference_frequency: float
    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("coefficients must be non-empty")
        if not coeffs[0] > 0:
            raise ValueError("c0 must be positive (propagation constants are positive)")
        if not self.reference_frequency > 0:
            raise ValueError("reference_frequency must be positive")

    def __call__(self, omega):
        x = np.asarray(omega, dtype=float) - self.reference_frequency
        # Horner
        result = np.zeros_like(x) + self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            result = result * x + c
        return result


@dataclass(frozen=True)
class DispersionModel:
    """Dispersion of the poled coupler.

    The pump band is uncoupled; the generated (telecom) band splits into
    supermodes ``beta0 -+ coupling_C``. The grating vector
    ``grating_order * 2 pi / grating_period`` is subtracted from every
    mismatch.
    """

    pump_band: BandPolynomial
    generated_band: BandPolynomial
    coupling_C: float
    grating_period: float
    grating_order: int = 1

    def __post_init__(self):
        if not self.coupling_C >= 0:
            raise ValueError("coupling_C must be >= 0")
        if not self.grating_period > 0:
            raise ValueError("grating_period must be positive")
        if int(self.grating_order) != self.grating_order or self.grating_order < 1:
            raise ValueError("grating_order must be a positive integer")

    @property
    def grating_vector(self) -> float:
        return self.grating_order * 2.0 * np.pi / self.grating_period


def _check_omega(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("angular frequency must be positive")
    return omega


def beta_uncoupled(model: DispersionModel, band, omega):
    """Propagation constant (1/m) of the uncoupled ``band`` at ``omega``."""
    omega = _check_omega(omega)
    band = Band(band)
    poly = model.pump_band if band is Band.PUMP else model.generated_band
    return poly(omega)


def beta_eigen(model: DispersionModel, mode: EigenLabel, omega):
    """Supermode propagation constant in the generated band."""
    mode = EigenLabel(mode)
    return beta_uncoupled(model, Band.GENERATED, omega) + mode.sign * model.coupling_C


def delta_beta(model: DispersionModel, m: EigenLabel, n: EigenLabel, omega_s, omega_i):
    """Phase mismatch of the (m, n) supermode pair, grating vector included.

    The pump frequency is fixed by energy conservation, ``omega_s + omega_i``.
    The coupling offsets are added after the shared material part so that
    SA and AS are bitwise identical and band offsets are exact multiples of C.
    """
    m, n = EigenLabel(m), EigenLabel(n)
    return material_mismatch(model, omega_s, omega_i) + pair_offset(model, m, n)


def material_mismatch(model: DispersionModel, omega_s, omega_i):
    """Mismatch shared by all supermode pairs (coupling excluded)."""
    omega_s = _check_omega(omega_s)
    omega_i = _check_omega(omega_i)
    return (
        model.pump_band(omega_s + omega_i)
        - model.generated_band(omega_s)
        - model.generated_band(omega_i)
        - model.grating_vector
    )


def pair_offset(model: DispersionModel, m: EigenLabel, n: EigenLabel) -> float:
    """Coupling contribution to the (m, n) mismatch: +2C for SS, 0 for SA/AS, -2C for AA."""
    return -(EigenLabel(m).sign + EigenLabel(n).sign) * model.coupling_C


def band_offsets(model: DispersionModel) -> dict[tuple[EigenLabel, EigenLabel], float]:
    """Mismatch of every pair relative to SA; independent of the band polynomials."""
    S, A = EigenLabel.S, EigenLabel.A
    return {(m, n): float(pair_offset(model, m, n)) for m in (S, A) for n in (S, A)}


def degenerate_pump_wavelength(
    model: DispersionModel,
    m: EigenLabel = EigenLabel.S,
    n: EigenLabel = EigenLabel.A,
    bracket_nm: Sequence[float] | None = None,
) -> float:
    """Pump wavelength (m) at which the (m, n) band is phase matched for
    degenerate photons, ``omega_s = omega_i = omega_p / 2``.

    Found with Brent's method; by default the search is bracketed +-20 nm
    around the pump band reference wavelength.
    """
    from scipy.optimize import brentq

    if bracket_nm is None:
        centre = float(omega_to_wavelength(model.pump_band.reference_frequency)) * 1e9
        bracket_nm = (centre - 20.0, centre + 20.0)

    def mismatch(lam_nm):
        wp = float(wavelength_to_omega(lam_nm * 1e-9))
        return float(delta_beta(model, m, n, wp / 2, wp / 2))

    return brentq(mismatch, *bracket_nm, xtol=1e-12, rtol=1e-15) * 1e-9
