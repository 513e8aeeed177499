"""Command-line entry point: ``noonpdc {jsa,pump-scan,phase-scan,verify}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import export, oracles
from .basis_transforms import eigen_to_waveguide
from .config import ConfigError, DeviceConfig, default_config_path, load_config
from .dispersion import EigenLabel, degenerate_pump_wavelength, omega_to_wavelength, wavelength_to_omega
from .observables import (
    coincidence_rates,
    dominant_harmonic,
    phase_scan,
    pump_scan,
    rate_fidelity,
    single_photon_fringe,
    visibility,
)
from .pdc_state import CENTRAL_PAIRS, EIGEN_ORDER, PhysicsWarning, assemble_eigen_state, select_bands

log = logging.getLogger("noonpdc")

EXIT_OK = 0
EXIT_STRICT = 6
EXIT_ORACLE = 7
EXIT_IO = 8


def _config_state(cfg: DeviceConfig, pump_nm: float | None = None):
    env = cfg.pump.envelope()
    if pump_nm is not None:
        env = env.recentered(float(wavelength_to_omega(pump_nm * 1e-9)))
    grid = cfg.grid.grid_for(env.central_frequency)
    return assemble_eigen_state(cfg.model(), env, cfg.pump.configuration, grid, cfg.length)


def _sa_phase_matched_nm(cfg: DeviceConfig) -> float | None:
    try:
        return degenerate_pump_wavelength(cfg.model()) * 1e9
    except ValueError:
        return None


def cmd_jsa(cfg: DeviceConfig, out_dir, pump_nm: float | None = None) -> export.RunManifest:
    """Write |amplitude|^2 of the four supermode bands and the four waveguide slices."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    man = export.RunManifest("jsa", cfg.to_dict())

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PhysicsWarning)
        state = _config_state(cfg, pump_nm)
    man.warnings += [str(w.message) for w in caught]
    wg = eigen_to_waveguide(state)
    grid = state.grid

    lam_s = omega_to_wavelength(grid.signal_axis) * 1e9
    lam_i = omega_to_wavelength(grid.idler_axis) * 1e9
    man.add(export.write_rows(
        out / "axes.csv",
        ["index", "signal_omega", "signal_nm", "idler_omega", "idler_nm"],
        [[str(k), grid.signal_axis[k], lam_s[k], grid.idler_axis[k], lam_i[k]] for k in range(grid.shape[0])],
    ))
    for m in EIGEN_ORDER:
        for n in EIGEN_ORDER:
            man.add(export.write_matrix(out / f"eigen_{m.value}{n.value}.csv", np.abs(state.slice(m, n)) ** 2))
    for j in range(2):
        for k in range(2):
            man.add(export.write_matrix(out / f"waveguide_{j + 1}{k + 1}.csv", np.abs(wg.amplitudes[j, k]) ** 2))

    sa = np.abs(state.slice(EigenLabel.S, EigenLabel.A)) ** 2
    results = {"band_probabilities": {f"{m.value}{n.value}": p for (m, n), p in state.band_probabilities().items()}}
    if sa.max() > 0:
        s_idx, i_idx = np.unravel_index(np.argmax(sa), sa.shape)
        results["sa_peak_nm"] = {"signal": float(lam_s[s_idx]), "idler": float(lam_i[i_idx])}
    rates = coincidence_rates(wg)
    results["rates"] = {"r1": rates.r1, "r2": rates.r2, "r12": rates.r12}
    results["rate_fidelity"] = rate_fidelity(rates)
    results["grid_cell_nm"] = float(abs(lam_s[1] - lam_s[0]))
    man.results = results
    man.write(out)
    return man


def cmd_pump_scan(cfg: DeviceConfig, out_dir, lambda_min_nm=756.0, lambda_max_nm=762.0, n_points=121,
                  workers: int | None = None) -> export.RunManifest:
    if n_points < 2:
        raise ValueError("pump scan needs at least 2 points")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    man = export.RunManifest("pump-scan", cfg.to_dict())
    lams = np.linspace(lambda_min_nm, lambda_max_nm, n_points)

    # pump_scan already collects its warnings into result.warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = pump_scan(cfg.model(), cfg.pump.envelope(), cfg.pump.configuration, cfg.grid,
                           cfg.length, lams, workers=workers)
    man.warnings += list(result.warnings)

    man.add(export.write_scan_csv(out / "pump_scan.csv", result))
    man.add(export.write_json(out / "pump_scan.json", export.scan_to_dict(result, cfg)))
    i_min = int(np.argmin(result.r12))
    i_best = int(np.argmax(result.fidelity))
    man.results = {
        "lambda_min_r12_nm": float(lams[i_min]),
        "fidelity_at_min_r12": float(result.fidelity[i_min]),
        "max_fidelity": float(result.fidelity[i_best]),
        "lambda_max_fidelity_nm": float(lams[i_best]),
        "sa_phase_matched_nm": _sa_phase_matched_nm(cfg),
    }
    man.write(out)
    return man


def cmd_phase_scan(cfg: DeviceConfig, out_dir, n_points=64, bands="central") -> export.RunManifest:
    """NOON fringe and single-photon reference over phi in [0, 2 pi).

    ``bands="central"`` keeps only the SA/AS contribution (the ideal state);
    ``"all"`` keeps the side-band leakage of the configured pump.
    """
    if n_points < 8:
        raise ValueError("phase scan needs at least 8 points")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    man = export.RunManifest("phase-scan", cfg.to_dict())

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PhysicsWarning)
        state = _config_state(cfg)
    man.warnings += [str(w.message) for w in caught]
    if bands == "central":
        state = select_bands(state, CENTRAL_PAIRS)
    elif bands != "all":
        raise ValueError(f"bands must be 'central' or 'all', got {bands!r}")

    phases = np.linspace(0.0, 2 * np.pi, n_points, endpoint=False)
    noon = phase_scan(eigen_to_waveguide(state), phases).r12
    classical = single_photon_fringe(phases)
    man.add(export.write_rows(out / "phase_scan.csv", ["phase", "noon_rate", "classical_rate"],
                              zip(phases, noon, classical)))
    man.results = {
        "bands": bands,
        "noon_period": 2 * np.pi / dominant_harmonic(noon),
        "classical_period": 2 * np.pi / dominant_harmonic(classical),
        "noon_visibility": visibility(noon),
        "classical_visibility": visibility(classical),
    }
    man.write(out)
    return man


def cmd_verify(out_dir=None, seed: int = 0) -> list[oracles.OracleReport]:
    reports = oracles.run_all(seed)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        export.write_json(out / "oracle_reports.json", [r.to_dict() for r in reports])
    return reports


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noonpdc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="device config (.cfg); defaults to the shipped paderborn_ppln.cfg")
        p.add_argument("--out-dir", type=Path, default=Path("out"))
        p.add_argument("--strict", action="store_true", help="treat physics-validation warnings as errors")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("jsa", help="write supermode and waveguide |JSA|^2 matrices")
    common(p)
    p.add_argument("--pump-nm", type=float, default=None, help="override the pump centre wavelength")

    p = sub.add_parser("pump-scan", help="coincidence rates versus pump wavelength")
    common(p)
    p.add_argument("--lambda-min", type=float, default=756.0)
    p.add_argument("--lambda-max", type=float, default=762.0)
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("phase-scan", help="two-photon fringe behind a phase plate and 50:50 splitter")
    common(p)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--bands", choices=("central", "all"), default="central")

    p = sub.add_parser("verify", help="run the brute-force oracles")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    if args.command == "verify":
        reports = cmd_verify(args.out_dir, args.seed)
        json.dump([r.to_dict() for r in reports], sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK if all(r.passed for r in reports) else EXIT_ORACLE

    try:
        cfg = load_config(args.config if args.config is not None else default_config_path())
    except ConfigError as exc:
        print(f"config error ({exc.code}): {exc}", file=sys.stderr)
        return exc.exit_code

    try:
        if args.command == "jsa":
            man = cmd_jsa(cfg, args.out_dir, args.pump_nm)
        elif args.command == "pump-scan":
            man = cmd_pump_scan(cfg, args.out_dir, args.lambda_min, args.lambda_max, args.points, args.workers)
        else:
            man = cmd_phase_scan(cfg, args.out_dir, args.points, args.bands)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2

    for w in man.warnings:
        log.warning("warning: %s", w)
    log.info(json.dumps(man.results, indent=2))
    if args.strict and man.warnings:
        return EXIT_STRICT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
