"""Loading and validation of sweep CSVs, JSON sidecars, and ramp CSVs.

Expected schemas (produced by `minact sweep` / `minact figures`):

- sweep CSV: header ``tau,protocol,fidelity,norm_drift,steps,action``
- sidecar JSON (same stem, .json): keys ``model``, ``params``, ``tau_a``,
  ``tau_l``, ``version``, ``partial``
- ramp CSV: header ``s,g``
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SWEEP_HEADER = ["tau", "protocol", "fidelity", "norm_drift", "steps", "action"]
RAMP_HEADER = ["s", "g"]
_SIDECAR_KEYS = {"model", "params", "tau_a", "tau_l", "version", "partial"}


class SchemaError(Exception):
    """A results file is missing or does not match the documented schema."""


@dataclass(frozen=True)
class SweepData:
    """One sweep result set: per-protocol curves plus sidecar metadata."""

    stem: str
    protocols: tuple
    taus: dict
    fidelities: dict
    meta: dict

    @property
    def tau_a(self):
        return self.meta["tau_a"]

    @property
    def tau_l(self):
        return self.meta["tau_l"]


@dataclass(frozen=True)
class RampProfile:
    s: np.ndarray
    g: np.ndarray


def _read_rows(path: Path, header):
    if not path.is_file():
        raise SchemaError(f"missing file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if first != header:
            raise SchemaError(f"{path}: header {first!r} != {header!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_sweep(results_dir, stem) -> SweepData:
    """Load ``<stem>.csv`` plus its JSON sidecar and validate both."""
    results_dir = Path(results_dir)
    rows = _read_rows(results_dir / f"{stem}.csv", SWEEP_HEADER)
    taus, fids = {}, {}
    for i, row in enumerate(rows, start=2):
        if len(row) != len(SWEEP_HEADER):
            raise SchemaError(f"{stem}.csv line {i}: expected {len(SWEEP_HEADER)} fields")
        try:
            tau, fid = float(row[0]), float(row[2])
        except ValueError as exc:
            raise SchemaError(f"{stem}.csv line {i}: {exc}") from None
        if tau <= 0 or not 0.0 <= fid <= 1.0 + 1e-9:
            raise SchemaError(f"{stem}.csv line {i}: tau/fidelity out of range")
        taus.setdefault(row[1], []).append(tau)
        fids.setdefault(row[1], []).append(fid)

    sidecar = results_dir / f"{stem}.json"
    if not sidecar.is_file():
        raise SchemaError(f"missing sidecar: {sidecar}")
    try:
        meta = json.loads(sidecar.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{sidecar}: {exc}") from None
    missing = _SIDECAR_KEYS - set(meta)
    if missing:
        raise SchemaError(f"{sidecar}: missing keys {sorted(missing)}")

    protocols = tuple(sorted(taus))
    return SweepData(
        stem=stem,
        protocols=protocols,
        taus={p: np.asarray(taus[p]) for p in protocols},
        fidelities={p: np.asarray(fids[p]) for p in protocols},
        meta=meta,
    )


def load_ramp(path) -> RampProfile:
    """Load an ``s,g`` profile CSV."""
    path = Path(path)
    rows = _read_rows(path, RAMP_HEADER)
    try:
        data = np.array([[float(a), float(b)] for a, b in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    if not (np.all(np.diff(data[:, 0]) > 0) and data[0, 0] == 0.0 and data[-1, 0] == 1.0):
        raise SchemaError(f"{path}: s column must increase from 0 to 1")
    return RampProfile(s=data[:, 0], g=data[:, 1])
