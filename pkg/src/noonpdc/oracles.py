"""Brute-force cross-checks of the analytic core.

Each oracle takes an algorithmically different route from the code it
checks: quadrature of the poling-length integral instead of the closed-form
sinc, and creation-operator expansion or permanents instead of tensor
contraction.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from .basis_transforms import (
    BALANCED_SPLITTER,
    TwoModeUnitary,
    WaveguideJSA,
    apply_two_mode_unitary,
)
from .pdc_state import FrequencyGrid, phase_matching


@dataclass(frozen=True)
class OracleReport:
    name: str
    max_abs_error: float
    tolerance: float
    passed: bool

    @classmethod
    def make(cls, name, max_abs_error, tolerance):
        err = float(max_abs_error)
        return cls(name, err, float(tolerance), bool(err <= tolerance))

    def to_dict(self):
        return asdict(self)


def phi_numeric(delta_beta: float, length: float, steps: int = 100_000) -> complex:
    """(1/L) * integral_0^L exp(-i dbeta z) dz by the midpoint rule."""
    if steps < 1000:
        raise ValueError("phi_numeric needs at least 1000 steps")
    z = (np.arange(steps) + 0.5) * (length / steps)
    # dz / L = 1 / steps, so the rule is a plain mean
    return complex(np.mean(np.exp(-1j * delta_beta * z)))


def _as_unitary(u) -> np.ndarray:
    if isinstance(u, TwoModeUnitary):
        return u.entries
    return TwoModeUnitary(u).entries


def fock_two_photon_oracle(input_amplitudes, u) -> np.ndarray:
    """Two-photon output amplitudes by expanding creation operators.

    The input state is sum_pq A[p, q] b_p^dag(ws) b_q^dag(wi) |0>. Each
    creation operator is replaced by sum_j u[j, p] c_j^dag, the product is
    multiplied out term by term into monomials, and like monomials are
    collected. Frequency labels keep the two photons' operators distinct.
    """
    amp = np.asarray(input_amplitudes, dtype=complex)
    if amp.shape != (2, 2):
        raise ValueError("input must be a 2x2 amplitude tensor")
    u = _as_unitary(u)

    def substitute(mode, label):
        # c^dag expansion of b_mode^dag(label) as {monomial: coefficient}
        return {((label, j),): u[j, mode] for j in range(2)}

    def multiply(left, right):
        out = defaultdict(complex)
        for mono_a, ca in left.items():
            for mono_b, cb in right.items():
                out[tuple(sorted(mono_a + mono_b))] += ca * cb
        return out

    poly = defaultdict(complex)
    for p, q in itertools.product(range(2), repeat=2):
        if amp[p, q] == 0:
            continue
        for mono, coeff in multiply(substitute(p, "s"), substitute(q, "i")).items():
            poly[mono] += amp[p, q] * coeff

    out = np.zeros((2, 2), dtype=complex)
    for mono, coeff in poly.items():
        ports = dict(mono)
        out[ports["s"], ports["i"]] += coeff
    return out


def permanent(m) -> complex:
    """Permanent by direct sum over permutations (small matrices only)."""
    m = np.asarray(m)
    n = m.shape[0]
    if n == 0:
        return 1.0
    return sum(math.prod(m[i, sigma[i]] for i in range(n)) for sigma in itertools.permutations(range(n)))


def fock_transition_amplitude(n_in, n_out, u) -> complex:
    """<n_out| U |n_in> for indistinguishable photons, via the permanent."""
    u = _as_unitary(u)
    if sum(n_in) != sum(n_out):
        return 0.0
    cols = [p for p, k in enumerate(n_in) for _ in range(k)]
    rows = [j for j, k in enumerate(n_out) for _ in range(k)]
    sub = u[np.ix_(rows, cols)]
    norm = math.sqrt(math.prod(math.factorial(k) for k in (*n_in, *n_out)))
    return permanent(sub) / norm


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def check_phase_matching(n_cases=100, length=11e-3, steps=100_000, seed=0, tol=1e-9) -> OracleReport:
    rng = np.random.default_rng(seed)
    dbs = rng.uniform(-1e4, 1e4, size=n_cases)
    err = max(abs(phi_numeric(db, length, steps) - complex(phase_matching(db, length))) for db in dbs)
    return OracleReport.make("phase_matching_vs_quadrature", err, tol)


def check_two_photon_unitary(n_cases=100, seed=1, tol=1e-12) -> OracleReport:
    rng = np.random.default_rng(seed)
    grid = FrequencyGrid(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    err = 0.0
    for _ in range(n_cases):
        u = random_unitary(rng)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        tensor = np.zeros((2, 2, 2, 2), dtype=complex)
        tensor[:, :, 0, 1] = a
        got = apply_two_mode_unitary(WaveguideJSA(grid, tensor), TwoModeUnitary(u)).amplitudes[:, :, 0, 1]
        err = max(err, float(np.max(np.abs(got - fock_two_photon_oracle(a, u)))))
    return OracleReport.make("two_mode_unitary_vs_operator_expansion", err, tol)


def check_hong_ou_mandel(tol=1e-15) -> OracleReport:
    """|1,1> through a balanced splitter: coincidence amplitude vanishes."""
    err = abs(fock_transition_amplitude((1, 1), (1, 1), BALANCED_SPLITTER))
    return OracleReport.make("hong_ou_mandel_permanent", err, tol)


def check_hom_operator_expansion(tol=1e-15) -> OracleReport:
    # one photon per port, identical spectra: A[0,1] = A[1,0]
    a = np.array([[0, 1], [1, 0]], dtype=complex) / np.sqrt(2)
    out = fock_two_photon_oracle(a, BALANCED_SPLITTER)
    return OracleReport.make("hong_ou_mandel_operator_expansion", max(abs(out[0, 1]), abs(out[1, 0])), tol)


def run_all(seed: int = 0) -> list[OracleReport]:
    return [
        check_phase_matching(seed=seed),
        check_two_photon_unitary(seed=seed + 1),
        check_hong_ou_mandel(),
        check_hom_operator_expansion(),
    ]
