"""Coincidence rates, rate fidelity, pump-wavelength and phase scans."""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .basis_transforms import (
    WaveguideJSA,
    apply_two_mode_unitary,
    eigen_to_waveguide,
    splitter_with_phase,
)
from .dispersion import SPEED_OF_LIGHT, DispersionModel, omega_to_wavelength, wavelength_to_omega
from .pdc_state import (
    NORMALIZATION_TOL,
    FrequencyGrid,
    PumpConfiguration,
    PumpEnvelope,
    assemble_eigen_state,
)


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class CoincidenceRates:
    r1: float
    r2: float
    r12: float

    @property
    def total(self) -> float:
        return self.r1 + self.r2 + self.r12


def coincidence_rates(state: WaveguideJSA, renormalize: bool = False) -> CoincidenceRates:
    """Two-photon detection probabilities in the waveguide basis.

    ``r12`` sums both orderings (signal in 1 and idler in 2, and vice versa).
    Unnormalized input raises unless ``renormalize`` is set.
    """
    p = np.sum(np.abs(state.amplitudes) ** 2, axis=(2, 3)) * state.grid.cell
    total = float(p.sum())
    if renormalize:
        if not total > 0:
            raise NormalizationError("state has zero norm")
        p = p / total
    elif abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"state is not normalized (total probability {total!r})")
    return CoincidenceRates(float(p[0, 0]), float(p[1, 1]), float(p[0, 1] + p[1, 0]))


def rate_fidelity(rates: CoincidenceRates) -> float:
    """Operational NOON fidelity (R1 + R2 - R12) / (R1 + R2 + R12)."""
    den = rates.r1 + rates.r2 + rates.r12
    if den == 0:
        raise ZeroDivisionError("all coincidence rates are zero")
    return (rates.r1 + rates.r2 - rates.r12) / den


fidelity = rate_fidelity


def fiber_splitter_estimate(rates: CoincidenceRates) -> tuple[CoincidenceRates, CoincidenceRates]:
    """Mimic the experimental counting chain for single-waveguide coincidences.

    A 50:50 fiber splitter after waveguide j sends a photon pair to separate
    detectors with probability 1/2, so the raw rate is r_j / 2; the estimator
    multiplies it back by 2. Returns ``(raw, corrected)``.
    """
    raw = CoincidenceRates(rates.r1 / 2, rates.r2 / 2, rates.r12)
    return raw, CoincidenceRates(2 * raw.r1, 2 * raw.r2, raw.r12)


@dataclass
class ScanResult:
    """One row per scan point.

    ``parameter_name`` is ``"pump_wavelength_nm"`` or ``"phase_rad"``.
    ``pair_rate`` holds the relative generation probability of each pump
    setting (the state's normalization constant); empty for phase scans.
    """

    parameter_name: str
    parameter_axis: np.ndarray
    rates: list[CoincidenceRates]
    fidelity: np.ndarray | None = None
    pair_rate: np.ndarray | None = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.parameter_axis = np.asarray(self.parameter_axis, dtype=float)
        _check_monotonic(self.parameter_axis)

    @property
    def r1(self) -> np.ndarray:
        return np.array([r.r1 for r in self.rates])

    @property
    def r2(self) -> np.ndarray:
        return np.array([r.r2 for r in self.rates])

    @property
    def r12(self) -> np.ndarray:
        return np.array([r.r12 for r in self.rates])


def _check_monotonic(axis):
    if axis.size == 0:
        raise ValueError("scan axis is empty")
    if axis.size > 1:
        d = np.diff(axis)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("scan axis must be strictly monotonic")


@dataclass(frozen=True)
class GridPolicy:
    """Square grid centred on the degenerate point omega_p / 2.

    ``span_nm`` is the full width of each axis expressed as a wavelength
    interval at the degenerate wavelength; it plays the role of the
    detection band-pass filter.
    """

    points: int = 401
    span_nm: float = 50.0

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("grid points must be >= 2")
        if not self.span_nm > 0:
            raise ValueError("span_nm must be positive")

    def grid_for(self, pump_omega: float) -> FrequencyGrid:
        centre = pump_omega / 2
        lam = float(omega_to_wavelength(centre))
        half_span = np.pi * SPEED_OF_LIGHT * (self.span_nm * 1e-9) / lam**2
        return FrequencyGrid.centered(centre, half_span, self.points)


def _map(fn: Callable, items: Sequence, workers: int | None):
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def pump_scan(
    model: DispersionModel,
    env_template: PumpEnvelope,
    config: PumpConfiguration,
    grid_policy: GridPolicy,
    length: float,
    wavelengths_nm: Sequence[float],
    workers: int | None = None,
) -> ScanResult:
    """Tune the pump centre wavelength and record waveguide-basis rates."""
    axis = np.asarray(wavelengths_nm, dtype=float)
    _check_monotonic(axis)

    def point(lam_nm):
        wp = float(wavelength_to_omega(lam_nm * 1e-9))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            state = assemble_eigen_state(
                model, env_template.recentered(wp), config, grid_policy.grid_for(wp), length
            )
        rates = coincidence_rates(eigen_to_waveguide(state))
        msgs = [f"{lam_nm:.6g} nm: {w.message}" for w in caught]
        return rates, state.norm_constant, msgs

    out = _map(point, list(axis), workers)
    rates = [r for r, _, _ in out]
    msgs = [m for _, _, ms in out for m in ms]
    for m in msgs:
        warnings.warn(m, RuntimeWarning, stacklevel=2)
    return ScanResult(
        "pump_wavelength_nm",
        axis,
        rates,
        fidelity=np.array([rate_fidelity(r) for r in rates]),
        pair_rate=np.array([n for _, n, _ in out]),
        warnings=msgs,
    )


def phase_scan(state: WaveguideJSA, phases: Sequence[float], workers: int | None = None) -> ScanResult:
    """Interfere both waveguide outputs on a 50:50 splitter after a phase plate.

    The rates of each row are those behind the splitter; ``r12`` is the
    cross-port coincidence probability.
    """
    axis = np.asarray(phases, dtype=float)
    if axis.size == 0:
        raise ValueError("phases must be non-empty")

    def point(phi):
        return coincidence_rates(apply_two_mode_unitary(state, splitter_with_phase(phi)))

    return ScanResult("phase_rad", axis, _map(point, list(axis), workers))


def single_photon_fringe(phases: Sequence[float], amplitudes=(1 / np.sqrt(2), 1 / np.sqrt(2)), port: int = 0):
    """Detection probability at ``port`` for one photon through the same interferometer.

    Stands in for the classical laser reference; the fringe has period 2 pi.
    """
    c = np.asarray(amplitudes, dtype=complex)
    c = c / np.linalg.norm(c)
    return np.array([abs((splitter_with_phase(phi).entries @ c)[port]) ** 2 for phi in np.asarray(phases, float)])


def visibility(trace) -> float:
    """(max - min) / (max + min) of a non-negative trace."""
    t = np.asarray(trace, dtype=float)
    if t.size == 0:
        raise ValueError("trace is empty")
    if np.any(t < 0):
        raise ValueError("trace must be non-negative")
    hi, lo = t.max(), t.min()
    if hi == 0:
        raise ValueError("visibility undefined for an all-zero trace")
    return float((hi - lo) / (hi + lo))


def dominant_harmonic(trace, max_harmonic: int = 2) -> int:
    """Index of the largest non-DC DFT magnitude among harmonics 1..max_harmonic.

    ``trace`` must be sampled uniformly over one full 2 pi period.
    """
    spectrum = np.abs(np.fft.rfft(np.asarray(trace, dtype=float)))
    harmonics = spectrum[1 : max_harmonic + 1]
    return int(np.argmax(harmonics)) + 1


def fringe_period(trace, max_harmonic: int = 2) -> float:
    return 2 * np.pi / dominant_harmonic(trace, max_harmonic)
