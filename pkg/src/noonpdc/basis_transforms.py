"""Supermode -> waveguide change of basis and two-mode linear optics on
two-photon amplitude tensors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pdc_state import EigenJSA, FrequencyGrid, _frozen, total_probability

UNITARITY_TOL = 1e-12

# rows: supermode (S, A); columns: waveguide (1, 2)
EIGEN_TO_WAVEGUIDE = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class TwoModeUnitary:
    entries: np.ndarray

    def __post_init__(self):
        u = _frozen(self.entries, complex)
        if u.shape != (2, 2):
            raise ValueError("a two-mode unitary is a 2x2 matrix")
        if not np.allclose(u @ u.conj().T, np.eye(2), rtol=0, atol=UNITARITY_TOL):
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "entries", u)

    def __matmul__(self, other: "TwoModeUnitary") -> "TwoModeUnitary":
        return TwoModeUnitary(self.entries @ other.entries)


@dataclass(frozen=True, eq=False)
class WaveguideJSA:
    """Amplitudes indexed ``[j, k, s, i]``: signal in waveguide j+1, idler in k+1."""

    grid: FrequencyGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = _frozen(self.amplitudes, complex)
        if amp.shape != (2, 2) + self.grid.shape:
            raise ValueError("amplitude tensor shape does not match the grid")
        object.__setattr__(self, "amplitudes", amp)

    def probability(self) -> float:
        return total_probability(self.amplitudes, self.grid)


def _two_photon_contract(u, amplitudes):
    # out[j,k] = sum_{p,q} u[j,p] u[k,q] amp[p,q]
    return np.einsum("jp,kq,pqsi->jksi", u, u, amplitudes, optimize=True)


def eigen_to_waveguide(state: EigenJSA) -> WaveguideJSA:
    """Rewrite each photon's supermode index in the waveguide basis.

    a_S = (b1 + b2)/sqrt(2), a_A = (b1 - b2)/sqrt(2), applied grid-pointwise.
    """
    amp = _two_photon_contract(EIGEN_TO_WAVEGUIDE.T, state.amplitudes)
    return WaveguideJSA(state.grid, amp)


def waveguide_to_eigen(state: WaveguideJSA) -> EigenJSA:
    # the transform is real, symmetric and its own inverse
    amp = _two_photon_contract(EIGEN_TO_WAVEGUIDE, state.amplitudes)
    return EigenJSA(state.grid, amp)


def apply_two_mode_unitary(state: WaveguideJSA, u: TwoModeUnitary) -> WaveguideJSA:
    if not isinstance(u, TwoModeUnitary):
        u = TwoModeUnitary(u)
    return WaveguideJSA(state.grid, _two_photon_contract(u.entries, state.amplitudes))


BALANCED_SPLITTER = TwoModeUnitary(np.array([[1, 1j], [1j, 1]]) / np.sqrt(2.0))


def phase_shifter(phi: float) -> TwoModeUnitary:
    return TwoModeUnitary(np.diag([1.0, np.exp(1j * phi)]))


def splitter_with_phase(phi: float) -> TwoModeUnitary:
    """Phase plate on arm 2 followed by a symmetric 50:50 beam splitter."""
    return BALANCED_SPLITTER @ phase_shifter(phi)
