"""Device configuration files (INI syntax) and their validation.

Values in the file use lab units (nm, um, mm); everything handed to the
physics layer is SI with angular frequencies.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from .dispersion import BandPolynomial, DispersionModel, wavelength_to_omega
from .observables import GridPolicy
from .pdc_state import PumpConfiguration, PumpEnvelope

DEFAULT_DEVICE = "paderborn_ppln.cfg"


class ConfigError(Exception):
    exit_code = 3
    code = "config_error"


class ConfigParseError(ConfigError):
    exit_code = 3
    code = "parse_error"


class ConfigMissingKeyError(ConfigError):
    exit_code = 4
    code = "missing_key"


class ConfigValueError(ConfigError):
    exit_code = 5
    code = "invalid_value"


@dataclass(frozen=True)
class BandSpec:
    reference_wavelength_nm: float
    coefficients: tuple[float, ...]

    def polynomial(self) -> BandPolynomial:
        omega_ref = float(wavelength_to_omega(self.reference_wavelength_nm * 1e-9))
        return BandPolynomial(omega_ref, self.coefficients)


@dataclass(frozen=True)
class DispersionSpec:
    pump_band: BandSpec
    generated_band: BandSpec
    coupling_C: float
    grating_period_um: float
    grating_order: int

    def model(self) -> DispersionModel:
        return DispersionModel(
            self.pump_band.polynomial(),
            self.generated_band.polynomial(),
            self.coupling_C,
            self.grating_period_um * 1e-6,
            self.grating_order,
        )


@dataclass(frozen=True)
class PumpSpec:
    central_wavelength_nm: float
    fwhm_nm: float
    configuration: PumpConfiguration

    def envelope(self) -> PumpEnvelope:
        return PumpEnvelope.from_wavelength(self.central_wavelength_nm, self.fwhm_nm)


@dataclass(frozen=True)
class DeviceConfig:
    dispersion: DispersionSpec
    length_mm: float
    pump: PumpSpec
    grid: GridPolicy

    @property
    def length(self) -> float:
        """Poled coupler length in m."""
        return self.length_mm * 1e-3

    def model(self) -> DispersionModel:
        return self.dispersion.model()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pump"]["configuration"] = self.pump.configuration.value
        for band in ("pump_band", "generated_band"):
            d["dispersion"][band]["coefficients"] = list(d["dispersion"][band]["coefficients"])
        return d


def _get(cp, section, key):
    if not cp.has_section(section):
        raise ConfigMissingKeyError(f"missing section [{section}] (needed for key '{key}')")
    if not cp.has_option(section, key):
        raise ConfigMissingKeyError(f"missing key '{key}' in section [{section}]")
    return cp.get(section, key)


def _float(cp, section, key, positive=True, allow_zero=False):
    raw = _get(cp, section, key)
    try:
        value = float(raw)
    except ValueError:
        raise ConfigValueError(f"[{section}] {key}: cannot parse {raw!r} as a number") from None
    if positive and not (value > 0 or (allow_zero and value == 0)):
        bound = ">= 0" if allow_zero else "> 0"
        raise ConfigValueError(f"[{section}] {key} must be {bound}, got {value!r}")
    return value


def _int(cp, section, key, minimum):
    raw = _get(cp, section, key)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigValueError(f"[{section}] {key}: cannot parse {raw!r} as an integer") from None
    if value < minimum:
        raise ConfigValueError(f"[{section}] {key} must be >= {minimum}, got {value}")
    return value


def _band(cp, section) -> BandSpec:
    ref = _float(cp, section, "reference_wavelength_nm")
    raw = _get(cp, section, "coefficients")
    try:
        coeffs = tuple(float(tok) for tok in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigValueError(f"[{section}] coefficients: cannot parse {raw!r}") from None
    if not coeffs:
        raise ConfigValueError(f"[{section}] coefficients must not be empty")
    if not coeffs[0] > 0:
        raise ConfigValueError(f"[{section}] coefficients: c0 must be > 0, got {coeffs[0]!r}")
    return BandSpec(ref, coeffs)


def parse_config(text: str) -> DeviceConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigParseError(f"cannot parse config: {exc}") from None

    dispersion = DispersionSpec(
        pump_band=_band(cp, "pump_band"),
        generated_band=_band(cp, "generated_band"),
        coupling_C=_float(cp, "dispersion", "coupling_C", allow_zero=True),
        grating_period_um=_float(cp, "dispersion", "grating_period_um"),
        grating_order=_int(cp, "dispersion", "grating_order", 1),
    )
    raw_mode = _get(cp, "pump", "configuration").strip()
    try:
        mode = PumpConfiguration(raw_mode)
    except ValueError:
        choices = ", ".join(m.value for m in PumpConfiguration)
        raise ConfigValueError(f"[pump] configuration must be one of {choices}; got {raw_mode!r}") from None
    pump = PumpSpec(
        central_wavelength_nm=_float(cp, "pump", "central_wavelength_nm"),
        fwhm_nm=_float(cp, "pump", "fwhm_nm"),
        configuration=mode,
    )
    grid = GridPolicy(points=_int(cp, "grid", "points", 2), span_nm=_float(cp, "grid", "span_nm"))
    return DeviceConfig(dispersion, _float(cp, "device", "length_mm"), pump, grid)


def load_config(path) -> DeviceConfig:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise ConfigParseError(f"config file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def default_config_path():
    return resources.files("noonpdc") / "devices" / DEFAULT_DEVICE


def load_default() -> DeviceConfig:
    return parse_config(default_config_path().read_text())


def dumps_config(cfg: DeviceConfig) -> str:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    d = cfg.dispersion
    for name, band in (("pump_band", d.pump_band), ("generated_band", d.generated_band)):
        cp[name] = {
            "reference_wavelength_nm": repr(band.reference_wavelength_nm),
            "coefficients": ", ".join(repr(c) for c in band.coefficients),
        }
    cp["dispersion"] = {
        "coupling_C": repr(d.coupling_C),
        "grating_period_um": repr(d.grating_period_um),
        "grating_order": str(d.grating_order),
    }
    cp["device"] = {"length_mm": repr(cfg.length_mm)}
    cp["pump"] = {
        "central_wavelength_nm": repr(cfg.pump.central_wavelength_nm),
        "fwhm_nm": repr(cfg.pump.fwhm_nm),
        "configuration": cfg.pump.configuration.value,
    }
    cp["grid"] = {"points": str(cfg.grid.points), "span_nm": repr(cfg.grid.span_nm)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
