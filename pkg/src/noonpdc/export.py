"""CSV/JSON writers with fixed formatting so reruns are byte-identical."""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__

FLOAT_FORMAT = ".12g"


def fmt(x) -> str:
    return format(float(x), FLOAT_FORMAT)


def write_rows(path, header: Sequence[str] | None, rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def write_matrix(path, matrix) -> Path:
    """Rows index the signal axis, columns the idler axis."""
    return write_rows(path, None, np.asarray(matrix, dtype=float))


def write_scan_csv(path, result) -> Path:
    fid = result.fidelity if result.fidelity is not None else [np.nan] * len(result.rates)
    header = ["parameter", "r1", "r2", "r12", "fidelity"]
    extra = result.pair_rate is not None
    if extra:
        header.append("pair_rate")
    rows = []
    for k, (p, r, f) in enumerate(zip(result.parameter_axis, result.rates, fid)):
        row = [p, r.r1, r.r2, r.r12, f]
        if extra:
            row.append(result.pair_rate[k])
        rows.append(row)
    return write_rows(path, header, rows)


def scan_to_dict(result, config=None) -> dict:
    d = {
        "parameter_name": result.parameter_name,
        "parameter": [float(p) for p in result.parameter_axis],
        "r1": [r.r1 for r in result.rates],
        "r2": [r.r2 for r in result.rates],
        "r12": [r.r12 for r in result.rates],
    }
    if result.fidelity is not None:
        d["fidelity"] = [float(f) for f in result.fidelity]
    if result.pair_rate is not None:
        d["pair_rate"] = [float(n) for n in result.pair_rate]
    if result.warnings:
        d["warnings"] = list(result.warnings)
    if config is not None:
        d["config"] = config.to_dict()
    return d


def write_json(path, payload) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


@dataclass
class RunManifest:
    command: str
    config: dict
    outputs: list[str] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def add(self, path) -> Path:
        path = Path(path)
        self.outputs.append(path.name)
        return path

    def write(self, out_dir) -> Path:
        path = Path(out_dir) / "manifest.json"
        self.outputs.append(path.name)
        write_json(path, {
            "command": self.command,
            "version": self.version,
            "timestamp": self.timestamp,
            "config": self.config,
            "outputs": self.outputs,
            "results": self.results,
            "warnings": self.warnings,
        })
        return path
