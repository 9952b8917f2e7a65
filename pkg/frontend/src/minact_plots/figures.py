"""Figure assembly: fidelity versus duration per protocol, with markers and insets.

Styling conventions: linear ramp red solid, minimal-action ramp blue dashed,
reference smooth ramp green dotted; tau_a as a light dotted grey vertical line,
tau_l as a dashed black one. The duration axis is log scaled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# identical CSVs must re-render to byte-identical images
matplotlib.rcParams["svg.hashsalt"] = "minact-plots"

import matplotlib.pyplot as plt

from .schema import SchemaError, load_ramp, load_sweep

STYLES = {
    "linear": {"color": "tab:red", "linestyle": "-"},
    "action": {"color": "tab:blue", "linestyle": "--"},
    "garbe": {"color": "tab:green", "linestyle": ":"},
}
LABELS = {"linear": "linear", "action": "minimal action", "garbe": "reference"}
TAU_A_STYLE = {"color": "0.7", "linestyle": ":", "linewidth": 1.0}
TAU_L_STYLE = {"color": "black", "linestyle": "--", "linewidth": 1.0}


@dataclass(frozen=True)
class FigureSpec:
    """One output figure: which result stems to panel up and where to write."""

    name: str
    stems: tuple
    ramp_stems: tuple = ()
    formats: tuple = ("svg", "png")

    def output_path(self, out_dir, fmt) -> Path:
        return Path(out_dir) / f"{self.name}.{fmt}"


FIGURES = (
    FigureSpec(name="avoided_crossing", stems=("lz",),
               ramp_stems=("lz_ramp_linear", "lz_ramp_action")),
    FigureSpec(name="ising_chain", stems=("ising_N20", "ising_N30", "ising_N60")),
    FigureSpec(name="fully_connected", stems=("fc_eta10", "fc_eta100"),
               ramp_stems=("fc_ramp_linear", "fc_ramp_action", "fc_ramp_garbe")),
)


def _protocol_of(ramp_stem):
    return ramp_stem.rsplit("_", 1)[-1]


def _plot_curves(ax, data):
    for protocol in data.protocols:
        style = STYLES.get(protocol, {})
        ax.plot(data.taus[protocol], data.fidelities[protocol],
                label=LABELS.get(protocol, protocol), **style)
    ax.set_xscale("log")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("fidelity")
    if data.tau_a is not None:
        ax.axvline(data.tau_a, **TAU_A_STYLE)
    if data.tau_l is not None:
        ax.axvline(data.tau_l, **TAU_L_STYLE)


def _plot_ramps(ax, results_dir, ramp_stems):
    for stem in ramp_stems:
        profile = load_ramp(Path(results_dir) / f"{stem}.csv")
        protocol = _protocol_of(stem)
        ax.plot(profile.s, profile.g, label=LABELS.get(protocol, protocol),
                **STYLES.get(protocol, {}))
    ax.set_xlabel(r"$s = t/\tau$")
    ax.set_ylabel(r"$G(s)$")


def build_lz_figure(results_dir, spec=FIGURES[0]):
    """Single panel with a ramp-profile inset."""
    data = load_sweep(results_dir, spec.stems[0])
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    _plot_curves(ax, data)
    ax.legend(loc="lower right", fontsize=8)
    inset = ax.inset_axes([0.12, 0.55, 0.38, 0.38])
    _plot_ramps(inset, results_dir, spec.ramp_stems)
    inset.tick_params(labelsize=7)
    inset.xaxis.label.set_size(7)
    inset.yaxis.label.set_size(7)
    fig.tight_layout()
    return fig


def build_ising_figure(results_dir, spec=FIGURES[1]):
    """One panel per chain size, shared fidelity axis."""
    fig, axes = plt.subplots(1, len(spec.stems), figsize=(3.4 * len(spec.stems), 3.2),
                             sharey=True)
    for label, ax, stem in zip("abc", axes, spec.stems):
        data = load_sweep(results_dir, stem)
        _plot_curves(ax, data)
        ax.set_title(f"({label}) N = {stem.split('N')[-1]}", fontsize=9)
        if ax is not axes[0]:
            ax.set_ylabel("")
    axes[0].legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    return fig


def build_fc_figure(results_dir, spec=FIGURES[2]):
    """Panel (a) ramp profiles, panels (b, c) fidelity curves per eta."""
    fig, axes = plt.subplots(1, 1 + len(spec.stems), figsize=(3.4 * (1 + len(spec.stems)), 3.2))
    _plot_ramps(axes[0], results_dir, spec.ramp_stems)
    axes[0].set_title("(a) protocols", fontsize=9)
    axes[0].legend(loc="upper left", fontsize=8)
    for label, ax, stem in zip("bc", axes[1:], spec.stems):
        data = load_sweep(results_dir, stem)
        _plot_curves(ax, data)
        ax.set_title(f"({label}) $\\eta$ = {stem.split('eta')[-1]}", fontsize=9)
    fig.tight_layout()
    return fig


_BUILDERS = {
    "avoided_crossing": build_lz_figure,
    "ising_chain": build_ising_figure,
    "fully_connected": build_fc_figure,
}


def render(results_dir, out_dir, only=None, fmt="svg"):
    """Validate inputs, build each figure, and write image files.

    All inputs are validated before any image is written, so a schema error
    leaves no partial output. Falls back to PNG if the SVG backend fails.
    Returns the list of written paths.
    """
    out_dir = Path(out_dir)
    specs = [s for s in FIGURES if only is None or s.name in only]
    if not specs:
        raise ValueError(f"no figures selected from {only!r}")
    figures = [( _BUILDERS[s.name](results_dir, s), s) for s in specs]
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fig, spec in figures:
        target = spec.output_path(out_dir, fmt)
        try:
            fig.savefig(target, metadata={"Date": None} if target.suffix == ".svg" else None)
        except Exception:
            if fmt == "png":
                raise
            target = spec.output_path(out_dir, "png")
            fig.savefig(target)
        plt.close(fig)
        written.append(target)
    return written
