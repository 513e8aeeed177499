import dataclasses

import numpy as np
import pytest

from noonpdc.config import load_default
from noonpdc.dispersion import BandPolynomial, DispersionModel, wavelength_to_omega
from noonpdc.observables import GridPolicy

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def default_cfg():
    return load_default()


@pytest.fixture(scope="session")
def model(default_cfg):
    return default_cfg.model()


@pytest.fixture(scope="session")
def fast_cfg(default_cfg):
    """Default device on a coarser, narrower grid for quick scans."""
    return dataclasses.replace(default_cfg, grid=GridPolicy(points=121, span_nm=12.0))


def simple_model(C=358.0, c0=1.0e6, slope=0.0, pump_c0=None):
    """Generated band with constant/linear beta around 1519.4 nm."""
    w_ref = float(wavelength_to_omega(1519.4e-9))
    gen = BandPolynomial(w_ref, (c0, slope) if slope else (c0,))
    pump = BandPolynomial(2 * w_ref, (pump_c0 or 2.5 * c0,))
    return DispersionModel(pump, gen, C, 16.6e-6, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
