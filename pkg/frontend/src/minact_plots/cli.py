"""Standalone entry point: ``plots <results-dir> --out <fig-dir>``."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .figures import FIGURES, render
from .schema import SchemaError

_NAMES = [s.name for s in FIGURES]


@click.command()
@click.argument("results_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              default=Path("figs"), show_default=True)
@click.option("--only", default=None,
              help=f"Comma-separated subset of {{{','.join(_NAMES)}}}.")
@click.option("--format", "fmt", type=click.Choice(["svg", "png"]), default="svg",
              show_default=True)
def main(results_dir, out_dir, only, fmt):
    """Render fidelity-versus-duration figures from a minact results directory."""
    selected = None
    if only is not None:
        selected = tuple(only.split(","))
        unknown = [n for n in selected if n not in _NAMES]
        if unknown:
            click.echo(f"error: unknown figure name(s) {unknown}", err=True)
            sys.exit(2)
    try:
        written = render(results_dir, out_dir, only=selected, fmt=fmt)
    except SchemaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
