import dataclasses
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noonpdc.basis_transforms import WaveguideJSA, eigen_to_waveguide
from noonpdc.dispersion import EigenLabel
from noonpdc.observables import (
    CoincidenceRates,
    NormalizationError,
    ScanResult,
    coincidence_rates,
    dominant_harmonic,
    fiber_splitter_estimate,
    phase_scan,
    pump_scan,
    rate_fidelity,
    single_photon_fringe,
    visibility,
)
from noonpdc.pdc_state import EigenJSA, FrequencyGrid, PumpConfiguration, assemble_eigen_state, select_bands

GRID = FrequencyGrid.centered(1.24e15, 2e12, 7)
SHAPE = (2, 2) + GRID.shape
FLAT = np.ones(GRID.shape) / np.sqrt(GRID.cell * GRID.shape[0] * GRID.shape[1])


def noon_state():
    amp = np.zeros(SHAPE, complex)
    amp[0, 0], amp[1, 1] = FLAT / np.sqrt(2), -FLAT / np.sqrt(2)
    return WaveguideJSA(GRID, amp)


def scan(cfg, lams, config=None, model=None, workers=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return pump_scan(model or cfg.model(), cfg.pump.envelope(), config or cfg.pump.configuration,
                         cfg.grid, cfg.length, lams, workers=workers)


class TestRates:
    def test_ideal_noon(self):
        r = coincidence_rates(noon_state())
        assert (r.r1, r.r2, r.r12) == pytest.approx((0.5, 0.5, 0.0), abs=1e-15)

    def test_ss_only(self):
        amp = np.zeros(SHAPE, complex)
        amp[0, 0] = FLAT
        r = coincidence_rates(eigen_to_waveguide(EigenJSA(GRID, amp)))
        assert (r.r1, r.r2, r.r12) == pytest.approx((0.25, 0.25, 0.5), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_completeness(self, seed):
        rng = np.random.default_rng(seed)
        amp = rng.normal(size=SHAPE) + 1j * rng.normal(size=SHAPE)
        amp /= np.sqrt(np.sum(abs(amp) ** 2) * GRID.cell)
        r = coincidence_rates(WaveguideJSA(GRID, amp))
        assert r.total == pytest.approx(1.0, abs=1e-9)
        assert min(r.r1, r.r2, r.r12) >= 0

    def test_unnormalized_rejected(self):
        amp = 2 * noon_state().amplitudes
        with pytest.raises(NormalizationError):
            coincidence_rates(WaveguideJSA(GRID, amp))
        r = coincidence_rates(WaveguideJSA(GRID, amp), renormalize=True)
        assert r.r1 == pytest.approx(0.5)


class TestFidelity:
    def test_perfect(self):
        assert rate_fidelity(CoincidenceRates(0.5, 0.5, 0.0)) == 1.0

    def test_equal_rates(self):
        assert rate_fidelity(CoincidenceRates(0.2, 0.2, 0.2)) == pytest.approx(1 / 3, rel=1e-15)

    def test_experimental_scale(self):
        assert rate_fidelity(CoincidenceRates(0.46, 0.46, 0.08)) == pytest.approx(0.84, abs=1e-12)

    def test_zero_rates(self):
        with pytest.raises(ZeroDivisionError):
            rate_fidelity(CoincidenceRates(0.0, 0.0, 0.0))

    @settings(max_examples=200, deadline=None)
    @given(s=st.floats(0.01, 1.0), a=st.floats(0.0, 1.0), b=st.floats(0.0, 1.0))
    def test_monotonic_in_cross_rate(self, s, a, b):
        lo, hi = sorted((a, b))
        if hi - lo < 1e-9:
            return
        f_lo = rate_fidelity(CoincidenceRates(s / 2, s / 2, lo))
        f_hi = rate_fidelity(CoincidenceRates(s / 2, s / 2, hi))
        assert f_hi < f_lo
        assert -1 <= f_hi <= 1


def test_fiber_splitter_estimator_round_trips():
    r = CoincidenceRates(0.4, 0.3, 0.3)
    raw, corrected = fiber_splitter_estimate(r)
    assert (raw.r1, raw.r2, raw.r12) == (0.2, 0.15, 0.3)
    assert corrected == r


class TestVisibility:
    def test_full(self):
        assert visibility([0.0, 1.0]) == 1.0

    def test_constant(self):
        assert visibility([0.3, 0.3, 0.3]) == 0.0

    @pytest.mark.parametrize("trace", [[], [0.0, 0.0], [-0.1, 1.0]])
    def test_invalid(self, trace):
        with pytest.raises(ValueError):
            visibility(trace)


class TestPhaseScan:
    phases = np.linspace(0, 2 * np.pi, 64, endpoint=False)

    def test_closed_form(self):
        r12 = phase_scan(noon_state(), self.phases).r12
        # offset pi for this splitter and the b1b1 - b2b2 sign
        np.testing.assert_allclose(r12, (1 + np.cos(2 * self.phases + np.pi)) / 2, atol=1e-12)

    def test_period_pi(self):
        res = phase_scan(noon_state(), self.phases)
        np.testing.assert_allclose(res.r12[:32], res.r12[32:], atol=1e-9)
        assert visibility(res.r12) == pytest.approx(1.0, abs=1e-9)

    def test_two_pi_periodic_for_any_state(self, rng):
        amp = rng.normal(size=SHAPE) + 1j * rng.normal(size=SHAPE)
        amp /= np.sqrt(np.sum(abs(amp) ** 2) * GRID.cell)
        st_ = WaveguideJSA(GRID, amp)
        a = phase_scan(st_, self.phases).r12
        b = phase_scan(st_, self.phases + 2 * np.pi).r12
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_harmonic_at_eight_samples(self):
        ph = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        assert dominant_harmonic(phase_scan(noon_state(), ph).r12) == 2
        assert dominant_harmonic(single_photon_fringe(ph)) == 1

    def test_classical_reference(self):
        f = single_photon_fringe(self.phases)
        np.testing.assert_allclose(f, (1 + np.cos(self.phases + np.pi / 2)) / 2, atol=1e-12)
        assert visibility(f) == pytest.approx(1.0, abs=1e-12)

    def test_workers_match_serial(self):
        a = phase_scan(noon_state(), self.phases).r12
        b = phase_scan(noon_state(), self.phases, workers=4).r12
        np.testing.assert_array_equal(a, b)

    def test_empty(self):
        with pytest.raises(ValueError):
            phase_scan(noon_state(), [])


def test_scan_axis_must_be_monotonic():
    r = CoincidenceRates(0.5, 0.5, 0.0)
    with pytest.raises(ValueError):
        ScanResult("phase_rad", [0.0, 1.0, 0.5], [r, r, r])
    with pytest.raises(ValueError):
        ScanResult("phase_rad", [], [])


class TestPumpScan:
    lams = np.linspace(758.9, 760.5, 33)

    def test_single_waveguide_three_extrema(self, fast_cfg):
        res = scan(fast_cfg, self.lams)
        counts = res.r12 * res.pair_rate
        i_min = int(np.argmin(abs(self.lams - 759.7)))
        left, right = counts[:i_min], counts[i_min + 1:]
        assert counts[i_min] < left.max() and counts[i_min] < right.max()
        # interior maxima on either side of the dip
        assert 0 < np.argmax(left) and np.argmax(right) < right.size - 1
        assert res.fidelity[i_min] > 0.9

    def test_symmetric_has_no_central_dip(self, fast_cfg):
        res = scan(fast_cfg, self.lams, PumpConfiguration.SYMMETRIC)
        i = int(np.argmin(abs(self.lams - 759.7)))
        assert res.r12[i] >= 0.45
        assert np.all(res.r12 >= 0.45)

    def test_antisymmetric_has_no_side_bands(self, fast_cfg):
        res = scan(fast_cfg, self.lams, PumpConfiguration.ANTISYMMETRIC)
        assert np.all(res.r12 <= 1e-12)
        np.testing.assert_allclose(res.r1, 0.5, atol=1e-12)

    def test_uncoupled_single_band(self, fast_cfg):
        m0 = dataclasses.replace(fast_cfg.dispersion, coupling_C=0.0).model()
        # all four bands coincide; each pump setting maps onto plain waveguide pairs
        single = scan(fast_cfg, self.lams, model=m0)
        np.testing.assert_allclose(single.r1, 1.0, atol=1e-9)
        sym = scan(fast_cfg, self.lams[::8], PumpConfiguration.SYMMETRIC, model=m0)
        np.testing.assert_allclose(sym.r1, 0.5, atol=1e-9)
        np.testing.assert_allclose(sym.r12, 0.0, atol=1e-9)
        peaks = np.flatnonzero(
            (single.pair_rate[1:-1] > single.pair_rate[:-2]) & (single.pair_rate[1:-1] > single.pair_rate[2:])
        )
        assert peaks.size == 1

    def test_uncoupled_ss_band_alone(self, fast_cfg):
        m0 = dataclasses.replace(fast_cfg.dispersion, coupling_C=0.0).model()
        env = fast_cfg.pump.envelope()
        state = assemble_eigen_state(m0, env, PumpConfiguration.SYMMETRIC,
                                     fast_cfg.grid.grid_for(env.central_frequency), fast_cfg.length)
        ss = select_bands(state, [(EigenLabel.S, EigenLabel.S)])
        r = coincidence_rates(eigen_to_waveguide(ss))
        assert (r.r1, r.r2, r.r12) == pytest.approx((0.25, 0.25, 0.5), abs=1e-9)

    def test_reversed_axis(self, fast_cfg):
        lams = self.lams[::4]
        fwd = scan(fast_cfg, lams)
        back = scan(fast_cfg, lams[::-1])
        np.testing.assert_array_equal(fwd.r12, back.r12[::-1])

    def test_workers_match_serial(self, fast_cfg):
        lams = self.lams[::4]
        a = scan(fast_cfg, lams)
        b = scan(fast_cfg, lams, workers=3)
        np.testing.assert_array_equal(a.r12, b.r12)
        np.testing.assert_array_equal(a.fidelity, b.fidelity)

    def test_conservation_along_scan(self, fast_cfg):
        res = scan(fast_cfg, self.lams[::4])
        for r in res.rates:
            assert r.total == pytest.approx(1.0, abs=1e-9)

    def test_non_monotonic_rejected(self, fast_cfg):
        with pytest.raises(ValueError):
            scan(fast_cfg, [759.0, 760.0, 759.5])
