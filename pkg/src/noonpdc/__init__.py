"""Parametric down-conversion in a periodically poled two-waveguide coupler.

Pumping the coupler so that one photon lands in each supermode and detecting
in the waveguide basis yields a two-photon NOON state: the cross-waveguide
terms cancel in the change of basis like Hong-Ou-Mandel interference.
"""

__version__ = "0.1.0"

from .basis_transforms import (
    TwoModeUnitary,
    WaveguideJSA,
    apply_two_mode_unitary,
    eigen_to_waveguide,
    splitter_with_phase,
)
from .dispersion import (
    BandPolynomial,
    DispersionModel,
    EigenLabel,
    beta_eigen,
    beta_uncoupled,
    delta_beta,
)
from .observables import (
    CoincidenceRates,
    GridPolicy,
    ScanResult,
    coincidence_rates,
    phase_scan,
    pump_scan,
    rate_fidelity,
    visibility,
)
from .pdc_state import (
    EigenJSA,
    FrequencyGrid,
    PumpConfiguration,
    PumpEnvelope,
    assemble_eigen_state,
    excitation_amplitudes,
    phase_matching,
    pump_alpha,
)
