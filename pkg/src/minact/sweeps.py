"""Fidelity-versus-duration sweeps, threshold metrics, and CSV serialization."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .dynamics import EvolutionResult, evolve
from .models import (
    FullyConnected,
    IsingChain,
    LandauZener,
    Timescales,
    fc_action_model,
    fully_connected,
    ising_action_model,
    lz_action_model,
    timescales,
)
from .ramps import (
    ActionModel,
    RampProfile,
    RampSpec,
    evaluate_action,
    fc_optimal_ramp,
    garbe_ramp,
    ising_optimal_ramp,
    linear_ramp,
    lz_optimal_ramp,
)

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "ThresholdNotAttained",
    "CSV_HEADER",
    "build_system",
    "make_ramp",
    "action_model_for",
    "run_sweep",
    "threshold_time",
]

CSV_HEADER = ["tau", "protocol", "fidelity", "norm_drift", "steps", "action"]
PROTOCOLS = ("linear", "action", "garbe")

_DEFAULT_ENDPOINTS = {"lz": (-10.0, 10.0), "ising": (0.0, 2.0), "fc": (0.1, 0.9)}


class ThresholdNotAttained(RuntimeError):
    """Requested fidelity threshold not reached anywhere on the sweep grid."""


@dataclass(frozen=True)
class SweepSpec:
    """One model configuration plus the protocols and tau grid to sweep.

    ``params`` carries the model constructor arguments:
    lz -> delta; ising -> N, omega; fc -> eta, omega, n_max (optional).
    """

    model: str
    params: dict
    g0: float
    g_tau: float
    protocols: tuple[str, ...]
    tau_min: float
    tau_max: float
    tau_points: int
    spacing: str = "log"
    output: Optional[str] = None

    def __post_init__(self):
        if self.model not in ("lz", "ising", "fc"):
            raise ValueError(f"unknown model {self.model!r}")
        if not self.protocols:
            raise ValueError("protocol list must be non-empty")
        for p in self.protocols:
            if p not in PROTOCOLS:
                raise ValueError(f"unknown protocol {p!r}")
            if p == "garbe" and self.model != "fc":
                raise ValueError("the garbe protocol is defined for the fc model only")
        if not (0 < self.tau_min <= self.tau_max):
            raise ValueError("tau bounds must be positive with tau_min <= tau_max")
        if self.tau_points < 1:
            raise ValueError("tau_points must be >= 1")
        if self.spacing not in ("log", "linear"):
            raise ValueError(f"spacing must be 'log' or 'linear', got {self.spacing!r}")

    def tau_grid(self) -> np.ndarray:
        if self.tau_points == 1:
            return np.array([self.tau_min])
        if self.spacing == "log":
            return np.geomspace(self.tau_min, self.tau_max, self.tau_points)
        return np.linspace(self.tau_min, self.tau_max, self.tau_points)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["protocols"] = list(self.protocols)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        d = dict(d)
        model = d.pop("model")
        params = dict(d.pop("params", {}))
        # tolerate the flat model-config form: {"model": "lz", "delta": ...}
        for key in ("delta", "N", "eta", "omega", "n_max"):
            if key in d:
                params[key] = d.pop(key)
        g0, g_tau = _DEFAULT_ENDPOINTS[model]
        return cls(
            model=model,
            params=params,
            g0=float(d.pop("g0", g0)),
            g_tau=float(d.pop("g_tau", g_tau)),
            protocols=tuple(d.pop("protocols", ("linear", "action"))),
            tau_min=float(d.pop("tau_min")),
            tau_max=float(d.pop("tau_max")),
            tau_points=int(d.pop("tau_points", 60)),
            spacing=d.pop("spacing", "log"),
            output=d.pop("output", None),
        )

    @classmethod
    def from_json(cls, path) -> "SweepSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class SweepRow:
    tau: float
    protocol: str
    fidelity: float
    norm_drift: float
    steps: int
    action: float
    converged: bool


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]
    scales: Timescales

    @property
    def partial(self) -> bool:
        return any(not r.converged for r in self.rows)

    def protocol_rows(self, protocol: str) -> list[SweepRow]:
        return sorted((r for r in self.rows if r.protocol == protocol), key=lambda r: r.tau)

    def metadata(self) -> dict:
        return {
            "model": self.spec.model,
            "params": self.spec.to_dict(),
            "tau_a": self.scales.tau_a,
            "tau_l": self.scales.tau_l,
            "version": __version__,
            "partial": self.partial,
        }

    def write(self, csv_path) -> None:
        """Write the rows CSV (12 significant digits) and a JSON sidecar."""
        csv_path = Path(csv_path)
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for r in self.rows:
                w.writerow(
                    [
                        f"{r.tau:.12g}",
                        r.protocol,
                        f"{r.fidelity:.12g}",
                        f"{r.norm_drift:.12g}",
                        str(r.steps),
                        f"{r.action:.12g}",
                    ]
                )
        sidecar = csv_path.with_suffix(".json")
        with open(sidecar, "w") as fh:
            json.dump(self.metadata(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def build_system(spec: SweepSpec):
    p = spec.params
    if spec.model == "lz":
        return LandauZener(delta=float(p.get("delta", 1.0)))
    if spec.model == "ising":
        return IsingChain(N=int(p["N"]), omega=float(p.get("omega", 1.0)))
    return fully_connected(
        eta=float(p["eta"]),
        g_max=max(spec.g0, spec.g_tau),
        n_max=int(p.get("n_max", 160)),
        omega=float(p.get("omega", 1.0)),
    )


def action_model_for(spec: SweepSpec, system=None) -> ActionModel:
    p = spec.params
    if spec.model == "lz":
        return lz_action_model(float(p.get("delta", 1.0)))
    if spec.model == "ising":
        return ising_action_model(int(p["N"]), float(p.get("omega", 1.0)))
    return fc_action_model(float(p.get("omega", 1.0)))


def make_ramp(spec: SweepSpec, protocol: str) -> RampProfile:
    if protocol == "linear":
        return linear_ramp(RampSpec(g0=spec.g0, g_tau=spec.g_tau, tau=1.0))
    if protocol == "garbe":
        return garbe_ramp(spec.g0, spec.g_tau)
    if spec.model == "lz":
        return lz_optimal_ramp(spec.g0, float(spec.params.get("delta", 1.0)))
    if spec.model == "ising":
        return ising_optimal_ramp(spec.g0, int(spec.params["N"]))
    return fc_optimal_ramp(spec.g0, spec.g_tau)


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepResult:
    """Evolve every (tau, protocol) point and collect fidelities and actions.

    Non-converged evolutions are recorded with their last fidelity and mark
    the sweep as partial rather than aborting it.  Tau points are independent
    and are dispatched to a bounded worker pool; assembly is order-preserving.
    """
    system = build_system(spec)
    scales = timescales(system, g_max=max(spec.g0, spec.g_tau)) if spec.model == "fc" else timescales(system)
    taus = spec.tau_grid()
    rows: list[SweepRow] = []
    workers = max(1, threads or 1)
    for protocol in spec.protocols:
        ramp = make_ramp(spec, protocol)
        amodel = action_model_for(spec)
        action_unit = evaluate_action(amodel, ramp, 1.0)  # S(tau) = action_unit / tau

        def point(tau: float) -> SweepRow:
            res = evolve(system, ramp, float(tau))
            return SweepRow(
                tau=float(tau),
                protocol=protocol,
                fidelity=res.fidelity,
                norm_drift=res.norm_drift,
                steps=res.step_count,
                action=action_unit / float(tau),
                converged=res.converged,
            )

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                rows.extend(ex.map(point, taus))
        else:
            rows.extend(point(t) for t in taus)
    result = SweepResult(spec=spec, rows=tuple(rows), scales=scales)
    if spec.output:
        result.write(spec.output)
    return result


def threshold_time(result: SweepResult, protocol: str, f_min: float) -> float:
    """Smallest grid tau whose fidelity reaches f_min for the given protocol."""
    rows = result.protocol_rows(protocol)
    if not rows:
        raise ValueError(f"no rows for protocol {protocol!r}")
    for r in rows:
        if r.fidelity >= f_min:
            return r.tau
    raise ThresholdNotAttained(
        f"fidelity {f_min} not attained on grid for protocol {protocol!r}"
    )
