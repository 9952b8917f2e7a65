"""Command-line interface: ramp synthesis, single evolutions, sweeps, figures.

Exit codes: 0 success, 2 usage/parameter error, 3 partial numerical failure.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click

from .dynamics import evolve
from .models import timescales
from .ramps import ActionQuadratureError, RampSynthesisError, evaluate_action
from .sweeps import SweepSpec, action_model_for, build_system, make_ramp, run_sweep

_MODELS = click.Choice(["lz", "ising", "fc"])
_PROTOCOLS = click.Choice(["linear", "action", "garbe"])


def _spec_from_flags(model, protocols, g0, gtau, delta, n_sites, eta, omega, n_max,
                     tau_min, tau_max, points, spacing) -> SweepSpec:
    params = {"omega": omega}
    if model == "lz":
        params = {"delta": delta}
    elif model == "ising":
        params["N"] = n_sites
    else:
        params["eta"] = eta
        if n_max:
            params["n_max"] = n_max
    defaults = {"lz": (-10.0 * delta, 10.0 * delta), "ising": (0.0, 2.0), "fc": (0.1, 0.9)}
    d0, d1 = defaults[model]
    return SweepSpec(
        model=model,
        params=params,
        g0=g0 if g0 is not None else d0,
        g_tau=gtau if gtau is not None else d1,
        protocols=tuple(protocols),
        tau_min=tau_min,
        tau_max=tau_max,
        tau_points=points,
        spacing=spacing,
    )


def _fail_usage(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Minimal adiabatic-action ramp synthesis and verification."""


@main.command("ramp")
@click.option("--model", type=_MODELS, required=True)
@click.option("--protocol", type=_PROTOCOLS, default="action", show_default=True)
@click.option("--g0", type=float, default=None, help="Start value of the control.")
@click.option("--gtau", type=float, default=None, help="End value of the control.")
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--N", "n_sites", type=int, default=20, show_default=True)
@click.option("--eta", type=float, default=100.0, show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--tau", type=float, default=None, help="If given, print the ramp's action at this duration.")
@click.option("--grid", type=int, default=401, show_default=True, help="Sample points in the CSV.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=Path("ramp.csv"), show_default=True)
def cmd_ramp(model, protocol, g0, gtau, delta, n_sites, eta, omega, tau, grid, out):
    """Write a ramp profile as a two-column (s, g) CSV."""
    try:
        spec = _spec_from_flags(model, (protocol,), g0, gtau, delta, n_sites, eta, omega,
                                None, 1.0, 1.0, 1, "log")
        ramp = make_ramp(spec, protocol)
        ramp.to_csv(out, points=grid)
        if tau is not None:
            action = evaluate_action(action_model_for(spec), ramp, tau)
            click.echo(f"action {action:.12g}")
    except (RampSynthesisError, ValueError, KeyError) as exc:
        _fail_usage(exc)
    except ActionQuadratureError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    click.echo(f"wrote {out} ({ramp.tag}, G(0)={ramp(0.0):.12g}, G(1)={ramp(1.0):.12g})")


@main.command("evolve")
@click.option("--model", type=_MODELS, required=True)
@click.option("--protocol", type=_PROTOCOLS, default="action", show_default=True)
@click.option("--g0", type=float, default=None)
@click.option("--gtau", type=float, default=None)
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--N", "n_sites", type=int, default=20, show_default=True)
@click.option("--eta", type=float, default=100.0, show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--n-max", type=int, default=None)
@click.option("--tau", type=float, required=True)
@click.option("--steps", type=int, default=None)
def cmd_evolve(model, protocol, g0, gtau, delta, n_sites, eta, omega, n_max, tau, steps):
    """Propagate one ramp and print the final-state fidelity."""
    try:
        spec = _spec_from_flags(model, (protocol,), g0, gtau, delta, n_sites, eta, omega,
                                n_max, tau, tau, 1, "log")
        system = build_system(spec)
        ramp = make_ramp(spec, protocol)
        res = evolve(system, ramp, tau, steps=steps)
    except (RampSynthesisError, ValueError, KeyError) as exc:
        _fail_usage(exc)
    click.echo(
        f"fidelity {res.fidelity:.12g} norm_drift {res.norm_drift:.3g} "
        f"steps {res.step_count} converged {res.converged}"
    )
    if not res.converged:
        sys.exit(3)


@main.command("sweep")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON SweepSpec file (overrides the individual flags).")
@click.option("--model", type=_MODELS, default=None)
@click.option("--protocols", default="linear,action", show_default=True)
@click.option("--g0", type=float, default=None)
@click.option("--gtau", type=float, default=None)
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--N", "n_sites", type=int, default=20, show_default=True)
@click.option("--eta", type=float, default=100.0, show_default=True)
@click.option("--omega", type=float, default=1.0, show_default=True)
@click.option("--tau-min", type=float, default=None)
@click.option("--tau-max", type=float, default=None)
@click.option("--points", type=int, default=60, show_default=True)
@click.option("--spacing", type=click.Choice(["log", "linear"]), default="log", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=Path("sweep.csv"), show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
def cmd_sweep(config, model, protocols, g0, gtau, delta, n_sites, eta, omega,
              tau_min, tau_max, points, spacing, out, threads):
    """Run one fidelity-versus-duration sweep and write CSV + JSON sidecar."""
    try:
        if config is not None:
            spec = SweepSpec.from_json(config)
        else:
            if model is None or tau_min is None or tau_max is None:
                raise RampSynthesisError("--model, --tau-min and --tau-max are required without --config")
            spec = _spec_from_flags(model, tuple(protocols.split(",")), g0, gtau, delta,
                                    n_sites, eta, omega, None, tau_min, tau_max, points, spacing)
        result = run_sweep(spec, threads=threads)
    except (RampSynthesisError, ValueError, KeyError) as exc:
        _fail_usage(exc)
    result.write(out)
    click.echo(f"wrote {out} ({len(result.rows)} rows, partial={result.partial})")
    if result.partial:
        sys.exit(3)


def _figure_specs(only):
    """The acceptance sweep configurations behind the three result sets."""
    sets = {
        "lz": [
            ("lz", SweepSpec(model="lz", params={"delta": 1.0}, g0=-10.0, g_tau=10.0,
                             protocols=("linear", "action"),
                             tau_min=0.1, tau_max=100.0, tau_points=60)),
        ],
        "ising": [],
        "fc": [],
    }
    for n in (20, 30, 60):
        chain_tau_a = 1.0 / (4.0 * math.sin(math.pi / n))
        sets["ising"].append(
            (f"ising_N{n}", SweepSpec(model="ising", params={"N": n, "omega": 1.0},
                                      g0=0.0, g_tau=2.0, protocols=("linear", "action"),
                                      tau_min=0.1 * chain_tau_a, tau_max=10.0 * (n / 4.0),
                                      tau_points=60))
        )
    fc_tau_a = 1.0 / (2.0 * (1.0 - 0.9) ** 0.5)
    for eta in (10, 100):
        sets["fc"].append(
            (f"fc_eta{eta}", SweepSpec(model="fc", params={"eta": float(eta), "omega": 1.0},
                                       g0=0.1, g_tau=0.9, protocols=("linear", "action", "garbe"),
                                       tau_min=0.1 * fc_tau_a, tau_max=100.0 * fc_tau_a,
                                       tau_points=60))
        )
    chosen = []
    for name in only:
        chosen.extend(sets[name])
    return chosen


@main.command("figures")
@click.option("--out", "outdir", type=click.Path(file_okay=False, path_type=Path),
              default=Path("results"), show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--points", type=int, default=None, help="Override the tau grid size (default 60).")
@click.option("--only", default="lz,ising,fc", show_default=True,
              help="Comma-separated subset of {lz,ising,fc}.")
def cmd_figures(outdir, threads, points, only):
    """Run the three reference sweeps and write per-panel CSVs plus ramp CSVs."""
    names = tuple(only.split(","))
    for name in names:
        if name not in ("lz", "ising", "fc"):
            _fail_usage(ValueError(f"unknown figure set {name!r}"))
    outdir.mkdir(parents=True, exist_ok=True)
    partial = False
    for stem, spec in _figure_specs(names):
        if points is not None:
            spec = SweepSpec.from_dict({**spec.to_dict(), "tau_points": points})
        result = run_sweep(spec, threads=threads)
        result.write(outdir / f"{stem}.csv")
        partial = partial or result.partial
        click.echo(f"wrote {outdir / (stem + '.csv')} (partial={result.partial})")
    # ramp profiles for the figure insets
    if "lz" in names:
        lz_spec = _figure_specs(("lz",))[0][1]
        for protocol in lz_spec.protocols:
            make_ramp(lz_spec, protocol).to_csv(outdir / f"lz_ramp_{protocol}.csv")
    if "fc" in names:
        fc_spec = _figure_specs(("fc",))[0][1]
        for protocol in fc_spec.protocols:
            make_ramp(fc_spec, protocol).to_csv(outdir / f"fc_ramp_{protocol}.csv")
    if partial:
        sys.exit(3)


if __name__ == "__main__":
    main()
