"""Two-photon joint spectral amplitude of the coupler in the supermode basis."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dispersion import (
    SPEED_OF_LIGHT,
    DispersionModel,
    EigenLabel,
    material_mismatch,
    pair_offset,
    wavelength_to_omega,
)

S, A = EigenLabel.S, EigenLabel.A
EIGEN_ORDER = (S, A)
SIDEBAND_PAIRS = ((S, S), (A, A))
CENTRAL_PAIRS = ((S, A), (A, S))
NORMALIZATION_TOL = 1e-9
TRUNCATION_LEVEL = 1e-6


class PhysicsWarning(UserWarning):
    """A physics-validity check failed; results may be unreliable."""


class EnvelopeTruncationWarning(PhysicsWarning):
    pass


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Uniform signal and idler angular-frequency axes (rad/s)."""

    signal_axis: np.ndarray
    idler_axis: np.ndarray

    def __post_init__(self):
        for name in ("signal_axis", "idler_axis"):
            axis = _frozen(getattr(self, name))
            if axis.ndim != 1 or axis.size < 2:
                raise ValueError(f"{name} needs at least 2 points")
            steps = np.diff(axis)
            if np.any(steps <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            if np.max(np.abs(steps - steps.mean())) > 1e-12 * abs(steps.mean()) + 4 * np.spacing(axis.max()):
                raise ValueError(f"{name} must be uniformly spaced")
            if axis[0] <= 0:
                raise ValueError(f"{name} must contain positive frequencies")
            object.__setattr__(self, name, axis)

    @classmethod
    def centered(cls, centre: float, half_span: float, points: int) -> "FrequencyGrid":
        """Square grid with both axes spanning ``centre +- half_span``."""
        if points < 2 or not half_span > 0:
            raise ValueError("degenerate grid")
        axis = centre + half_span * np.linspace(-1.0, 1.0, points)
        return cls(axis, axis.copy())

    @property
    def d_omega_s(self) -> float:
        return float((self.signal_axis[-1] - self.signal_axis[0]) / (self.signal_axis.size - 1))

    @property
    def d_omega_i(self) -> float:
        return float((self.idler_axis[-1] - self.idler_axis[0]) / (self.idler_axis.size - 1))

    @property
    def cell(self) -> float:
        return self.d_omega_s * self.d_omega_i

    @property
    def shape(self) -> tuple[int, int]:
        return (self.signal_axis.size, self.idler_axis.size)

    @property
    def is_square(self) -> bool:
        return self.signal_axis.shape == self.idler_axis.shape and np.array_equal(
            self.signal_axis, self.idler_axis
        )

    def mesh(self):
        return self.signal_axis[:, None], self.idler_axis[None, :]


@dataclass(frozen=True)
class PumpEnvelope:
    """Gaussian pump amplitude alpha(omega_s + omega_i)."""

    central_frequency: float
    spectral_std: float
    amplitude_scale: float = 1.0

    def __post_init__(self):
        if not self.spectral_std > 0:
            raise ValueError("spectral_std must be positive")
        if not self.central_frequency > 0:
            raise ValueError("central_frequency must be positive")

    @classmethod
    def from_wavelength(cls, central_nm: float, fwhm_nm: float, amplitude_scale: float = 1.0):
        """Build from a central wavelength and FWHM, both in nm.

        The FWHM is that of the amplitude envelope; sigma = FWHM / (2 sqrt(2 ln 2)),
        converted to angular frequency at the central wavelength.
        """
        lam = central_nm * 1e-9
        fwhm_omega = 2.0 * np.pi * SPEED_OF_LIGHT * (fwhm_nm * 1e-9) / lam**2
        sigma = fwhm_omega / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        return cls(float(wavelength_to_omega(lam)), float(sigma), amplitude_scale)

    def recentered(self, central_frequency: float) -> "PumpEnvelope":
        return PumpEnvelope(central_frequency, self.spectral_std, self.amplitude_scale)


class PumpConfiguration(enum.Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    SINGLE_WAVEGUIDE_1 = "single_waveguide_1"
    SINGLE_WAVEGUIDE_2 = "single_waveguide_2"


@dataclass(frozen=True, eq=False)
class EigenJSA:
    """Normalized amplitudes indexed ``[M, N, s, i]`` with M, N in (S, A).

    ``norm_constant`` is the probability of the assembled state before
    normalization, i.e. a relative pair-generation rate.
    """

    grid: FrequencyGrid
    amplitudes: np.ndarray
    norm_constant: float = 1.0

    def __post_init__(self):
        amp = _frozen(self.amplitudes, complex)
        if amp.shape != (2, 2) + self.grid.shape:
            raise ValueError(f"amplitude tensor shape {amp.shape} != {(2, 2) + self.grid.shape}")
        object.__setattr__(self, "amplitudes", amp)

    def slice(self, m: EigenLabel, n: EigenLabel) -> np.ndarray:
        return self.amplitudes[EIGEN_ORDER.index(EigenLabel(m)), EIGEN_ORDER.index(EigenLabel(n))]

    def probability(self) -> float:
        return total_probability(self.amplitudes, self.grid)

    def band_probabilities(self) -> dict[tuple[EigenLabel, EigenLabel], float]:
        weights = np.sum(np.abs(self.amplitudes) ** 2, axis=(2, 3)) * self.grid.cell
        return {(m, n): float(weights[a, b]) for a, m in enumerate(EIGEN_ORDER) for b, n in enumerate(EIGEN_ORDER)}


def total_probability(amplitudes, grid: FrequencyGrid) -> float:
    """Midpoint-rule sum of |amplitude|^2 over the grid and all mode indices."""
    return float(np.sum(np.abs(amplitudes) ** 2) * grid.cell)


def phase_matching(delta_beta, length):
    """sinc(x) exp(-i x), x = delta_beta * length / 2."""
    if not length > 0:
        raise ValueError("length must be positive")
    x = np.asarray(delta_beta, dtype=float) * (length / 2.0)
    # np.sinc is the normalized sinc
    return np.sinc(x / np.pi) * np.exp(-1j * x)


def pump_alpha(env: PumpEnvelope, omega_s, omega_i):
    detuning = np.asarray(omega_s, dtype=float) + np.asarray(omega_i, dtype=float) - env.central_frequency
    return env.amplitude_scale * np.exp(-(detuning**2) / (2.0 * env.spectral_std**2))


def excitation_amplitudes(config: PumpConfiguration) -> tuple[complex, complex]:
    """Supermode excitation amplitudes (gamma, delta) for a pump configuration."""
    config = PumpConfiguration(config)
    h = 1.0 / np.sqrt(2.0)
    return {
        PumpConfiguration.SYMMETRIC: (1.0 + 0j, 0j),
        PumpConfiguration.ANTISYMMETRIC: (0j, 1.0 + 0j),
        PumpConfiguration.SINGLE_WAVEGUIDE_1: (h + 0j, h + 0j),
        PumpConfiguration.SINGLE_WAVEGUIDE_2: (h + 0j, -h + 0j),
    }[config]


def envelope_truncation(env: PumpEnvelope, grid: FrequencyGrid) -> float:
    """Envelope value at the extreme sum frequencies of the grid, relative to peak."""
    lo = pump_alpha(env, grid.signal_axis[0], grid.idler_axis[0])
    hi = pump_alpha(env, grid.signal_axis[-1], grid.idler_axis[-1])
    return float(max(lo, hi) / env.amplitude_scale)


def assemble_eigen_state(
    model: DispersionModel,
    env: PumpEnvelope,
    config: PumpConfiguration,
    grid: FrequencyGrid,
    length: float,
) -> EigenJSA:
    """Joint spectral amplitude w(M,N) alpha(ws+wi) Phi(dbeta_MN, L), normalized."""
    edge = envelope_truncation(env, grid)
    if edge >= TRUNCATION_LEVEL:
        warnings.warn(
            f"pump envelope is {edge:.3g} of peak at the grid edge; grid truncates the pump",
            EnvelopeTruncationWarning,
            stacklevel=2,
        )
    gamma, delta = excitation_amplitudes(config)
    weights = {(S, S): gamma, (S, A): delta, (A, S): delta, (A, A): gamma}

    ws, wi = grid.mesh()
    alpha = pump_alpha(env, ws, wi)
    base = material_mismatch(model, ws, wi)
    amp = np.zeros((2, 2) + grid.shape, dtype=complex)
    shared = {}  # SA and AS have the same offset; evaluate Phi once
    for a, m in enumerate(EIGEN_ORDER):
        for b, n in enumerate(EIGEN_ORDER):
            w = weights[(m, n)]
            if w == 0:
                continue
            offset = pair_offset(model, m, n)
            if offset not in shared:
                shared[offset] = alpha * phase_matching(base + offset, length)
            amp[a, b] = w * shared[offset]

    norm = total_probability(amp, grid)
    if not norm > 0:
        raise ValueError("assembled state has zero amplitude on this grid")
    amp /= np.sqrt(norm)
    return EigenJSA(grid, amp, norm)


def select_bands(state: EigenJSA, pairs: Iterable[tuple[EigenLabel, EigenLabel]]) -> EigenJSA:
    """Keep only the given (M, N) slices and renormalize.

    Selecting the central pairs reproduces the ideal state obtained when only
    the SA/AS phase matching is excited.
    """
    keep = {(EigenLabel(m), EigenLabel(n)) for m, n in pairs}
    amp = np.array(state.amplitudes)
    for a, m in enumerate(EIGEN_ORDER):
        for b, n in enumerate(EIGEN_ORDER):
            if (m, n) not in keep:
                amp[a, b] = 0
    prob = total_probability(amp, state.grid)
    if not prob > 0:
        raise ValueError("selected bands carry no amplitude")
    amp /= np.sqrt(prob)
    return EigenJSA(state.grid, amp, state.norm_constant * prob)
