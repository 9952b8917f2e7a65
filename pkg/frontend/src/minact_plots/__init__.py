"""Figure rendering for minact sweep results."""

from .schema import RampProfile, SchemaError, SweepData, load_ramp, load_sweep
from .figures import FigureSpec, build_fc_figure, build_ising_figure, build_lz_figure, render

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "RampProfile",
    "SchemaError",
    "SweepData",
    "build_fc_figure",
    "build_ising_figure",
    "build_lz_figure",
    "load_ramp",
    "load_sweep",
    "render",
]
