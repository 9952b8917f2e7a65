"""Control-ramp synthesis and adiabatic-action evaluation.

A ramp g(t) = G(t/tau) is scored by the adiabatic action

    S = (1/tau) * int_0^1 c(G(s)) G'(s)^2 / Gamma(G(s))^4 ds,

where c(g) is the squared drive norm per unit (dg/dt)^2 and Gamma(g) the
relevant spectral gap (hbar = 1 throughout).  Minimisers of S obey a
conserved first integral A(G) G'^2 = const with A(g) = c(g)/Gamma(g)^4,
so the Euler-Lagrange boundary-value problem reduces to the quadrature

    s(g) = int_{g0}^{g} sqrt(A) du / int_{g0}^{g_tau} sqrt(A) du,

inverted monotonically.  This module provides the linear baseline, the
closed-form minimal-action ramps for the three built-in systems, the
critical-exponent comparison ramp, and the generic numeric solver.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.interpolate import PchipInterpolator

__all__ = [
    "RampSpec",
    "RampProfile",
    "ActionModel",
    "RampSynthesisError",
    "ELSolverError",
    "ActionQuadratureError",
    "linear_ramp",
    "lz_optimal_ramp",
    "family_optimal_ramp",
    "ising_optimal_ramp",
    "fc_optimal_ramp",
    "garbe_ramp",
    "solve_euler_lagrange",
    "evaluate_action",
    "gap_table_model",
    "profile_from_csv",
]


class RampSynthesisError(ValueError):
    """Invalid parameters for a ramp family."""


class ELSolverError(RuntimeError):
    """Numeric Euler-Lagrange solve failed (non-integrable or degenerate density)."""


class ActionQuadratureError(RuntimeError):
    """Action quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class RampSpec:
    """Endpoints and duration of a control sweep (times in 1/omega, 1/Delta for LZ)."""

    g0: float
    g_tau: float
    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise RampSynthesisError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class RampProfile:
    """A control law G(s) on s in [0, 1] with fixed endpoints.

    ``tag`` records the family the profile came from:
    linear | lz-action | family-action | fc-action | garbe | numeric-EL.
    Evaluation accepts scalars or arrays.  ``derivative`` uses the analytic
    form when the family provides one, otherwise one-sided/centered finite
    differences on the evaluator.
    """

    g0: float
    g_tau: float
    tag: str
    _fn: Callable[[np.ndarray], np.ndarray]
    _dfn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    samples: Optional[np.ndarray] = None  # (n, 2) columns (s, G) for numeric profiles

    def __call__(self, s):
        arr = np.asarray(s, dtype=float)
        out = np.asarray(self._fn(arr))
        return float(out.reshape(-1)[0]) if np.ndim(s) == 0 else out

    @property
    def has_analytic_derivative(self) -> bool:
        return self._dfn is not None

    def derivative(self, s):
        arr = np.asarray(s, dtype=float)
        if self._dfn is not None:
            out = np.asarray(self._dfn(arr))
        else:
            out = np.asarray(_fd_derivative(self._fn, arr))
        return float(out.reshape(-1)[0]) if np.ndim(s) == 0 else out

    def to_csv(self, path, points: int = 401) -> None:
        """Write the profile as a two-column CSV with header ``s,g``."""
        s = np.linspace(0.0, 1.0, points)
        g = self(s)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "g"])
            for si, gi in zip(s, g):
                w.writerow([f"{si:.12g}", f"{gi:.12g}"])


def _fd_derivative(fn, s, h: float = 1e-5):
    """Second-order finite differences, Richardson-refined in the interior."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty_like(s)
    interior = (s >= 2 * h) & (s <= 1 - 2 * h)
    si = s[interior]
    if si.size:
        out[interior] = (
            8 * (fn(si + h) - fn(si - h)) - (fn(si + 2 * h) - fn(si - 2 * h))
        ) / (12 * h)
    lo = s < 2 * h
    if lo.any():
        sl = s[lo]
        out[lo] = (-3 * fn(sl) + 4 * fn(sl + h) - fn(sl + 2 * h)) / (2 * h)
    hi = s > 1 - 2 * h
    if hi.any():
        sh = s[hi]
        out[hi] = (3 * fn(sh) - 4 * fn(sh - h) + fn(sh - 2 * h)) / (2 * h)
    return out


@dataclass(frozen=True)
class ActionModel:
    """Drive weight c(g) and gap estimate Gamma(g) defining the action density.

    ``weight`` and ``gap`` must accept numpy arrays.  Gamma must be positive
    on the open interior of ``domain``; it may vanish only at isolated
    endpoints, which the solver excludes from quadrature nodes.
    """

    weight: Callable[[np.ndarray], np.ndarray]
    gap: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float] = (-math.inf, math.inf)

    def density(self, g):
        """A(g) = c(g) / Gamma(g)^4, the first-integral weight."""
        g = np.asarray(g, dtype=float)
        return self.weight(g) / self.gap(g) ** 4

    def sqrt_density(self, g):
        g = np.asarray(g, dtype=float)
        return np.sqrt(self.weight(g)) / self.gap(g) ** 2


def gap_table_model(path, weight: float | Callable = 1.0) -> ActionModel:
    """Build an ActionModel from a tabulated (g, Gamma) CSV, linearly interpolated.

    The file must have header ``g,gamma`` with g strictly increasing.
    """
    g_vals, gam_vals = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["g", "gamma"]:
            raise RampSynthesisError(f"expected header 'g,gamma' in {path}")
        for row in reader:
            if not row:
                continue
            g_vals.append(float(row[0]))
            gam_vals.append(float(row[1]))
    g_arr = np.asarray(g_vals)
    gam_arr = np.asarray(gam_vals)
    if g_arr.size < 2 or np.any(np.diff(g_arr) <= 0):
        raise RampSynthesisError("gap table needs at least two strictly increasing g values")
    if np.any(gam_arr[1:-1] <= 0):
        raise RampSynthesisError("tabulated gap must be positive on the interior")
    if callable(weight):
        wfn = weight
    else:
        w = float(weight)
        wfn = lambda g: np.full_like(np.asarray(g, dtype=float), w)
    return ActionModel(
        weight=wfn,
        gap=lambda g: np.interp(np.asarray(g, dtype=float), g_arr, gam_arr),
        domain=(float(g_arr[0]), float(g_arr[-1])),
    )


def profile_from_csv(path, tag: str = "tabulated") -> RampProfile:
    """Load a sampled (s, g) profile written by :meth:`RampProfile.to_csv`."""
    s_vals, g_vals = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["s", "g"]:
            raise RampSynthesisError(f"expected header 's,g' in {path}")
        for row in reader:
            if not row:
                continue
            s_vals.append(float(row[0]))
            g_vals.append(float(row[1]))
    s_arr = np.asarray(s_vals)
    g_arr = np.asarray(g_vals)
    if s_arr.size < 2 or np.any(np.diff(s_arr) <= 0):
        raise RampSynthesisError("profile table needs strictly increasing s")
    interp = PchipInterpolator(s_arr, g_arr)
    return RampProfile(
        g0=float(g_arr[0]),
        g_tau=float(g_arr[-1]),
        tag=tag,
        _fn=lambda s: interp(np.clip(s, s_arr[0], s_arr[-1])),
        samples=np.column_stack([s_arr, g_arr]),
    )


# ---------------------------------------------------------------------------
# Ramp families
# ---------------------------------------------------------------------------

def constant_ramp(g0: float) -> RampProfile:
    """Degenerate g0 == g_tau limit: G(s) = g0, zero action."""
    g0 = float(g0)
    return RampProfile(
        g0=g0,
        g_tau=g0,
        tag="linear",
        _fn=lambda s: np.full_like(np.asarray(s, dtype=float), g0),
        _dfn=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
    )


def linear_ramp(spec: RampSpec) -> RampProfile:
    """G(s) = g0 + (g_tau - g0) s."""
    g0, g_tau = float(spec.g0), float(spec.g_tau)
    slope = g_tau - g0
    return RampProfile(
        g0=g0,
        g_tau=g_tau,
        tag="linear",
        _fn=lambda s: g0 + slope * np.asarray(s, dtype=float),
        _dfn=lambda s: np.full_like(np.asarray(s, dtype=float), slope),
    )


def lz_optimal_ramp(g0: float, delta: float) -> RampProfile:
    """Minimal-action ramp for the avoided crossing, sweeping g0 -> -g0.

    G(s) = -Delta tan[(2s - 1) arctan(g0/Delta)].
    """
    if not delta > 0:
        raise RampSynthesisError(f"delta must be positive, got {delta}")
    g0 = float(g0)
    delta = float(delta)
    a = math.atan(g0 / delta)

    def fn(s):
        return -delta * np.tan((2 * np.asarray(s, dtype=float) - 1) * a)

    def dfn(s):
        th = (2 * np.asarray(s, dtype=float) - 1) * a
        return -2 * a * delta / np.cos(th) ** 2

    return RampProfile(g0=g0, g_tau=-g0, tag="lz-action", _fn=fn, _dfn=dfn)


def family_optimal_ramp(g0: float, beta: float, gamma: float) -> RampProfile:
    """Minimal-action ramp for the Lorentzian-density family.

    G(s) = beta + gamma tan[(1-s) arctan((g0-beta)/gamma)
                            - s arctan((g0+beta-2)/gamma)];
    the target endpoint G(1) = 2 - g0 is forced algebraically.
    """
    if not gamma > 0:
        raise RampSynthesisError(f"gamma must be positive, got {gamma}")
    g0, beta, gamma = float(g0), float(beta), float(gamma)
    a = math.atan((g0 - beta) / gamma)
    b = math.atan((g0 + beta - 2) / gamma)

    def fn(s):
        s = np.asarray(s, dtype=float)
        return beta + gamma * np.tan((1 - s) * a - s * b)

    def dfn(s):
        s = np.asarray(s, dtype=float)
        phi = (1 - s) * a - s * b
        return -gamma * (a + b) / np.cos(phi) ** 2

    return RampProfile(g0=g0, g_tau=2 - g0, tag="family-action", _fn=fn, _dfn=dfn)


def ising_optimal_ramp(g0: float, N: int) -> RampProfile:
    """Minimal-action ramp for the Ising chain's lowest momentum subspace.

    Delegates to :func:`family_optimal_ramp` with beta = cos(pi/N),
    gamma = sin(pi/N).
    """
    if N != int(N) or int(N) % 2 or int(N) < 4:
        raise RampSynthesisError(f"N must be an even integer >= 4, got {N}")
    N = int(N)
    return family_optimal_ramp(g0, math.cos(math.pi / N), math.sin(math.pi / N))


def fc_optimal_ramp(g0: float, g_tau: float) -> RampProfile:
    """Minimal-action ramp for the fully connected model, valid for 0 < g < 1.

    G(s) = sqrt[(g0^2 - 1) ((g_tau^2 - 1)/(g0^2 - 1))^s + 1].
    """
    if not (0 < g0 < 1 and 0 < g_tau < 1):
        raise RampSynthesisError(f"endpoints must lie in (0, 1), got {g0}, {g_tau}")
    if g0 == g_tau:
        return constant_ramp(g0)
    g0, g_tau = float(g0), float(g_tau)
    a = g0 * g0 - 1.0
    r = (g_tau * g_tau - 1.0) / a
    logr = math.log(r)

    def fn(s):
        return np.sqrt(a * np.power(r, np.asarray(s, dtype=float)) + 1.0)

    def dfn(s):
        rs = np.power(r, np.asarray(s, dtype=float))
        return a * rs * logr / (2.0 * np.sqrt(a * rs + 1.0))

    return RampProfile(g0=g0, g_tau=g_tau, tag="fc-action", _fn=fn, _dfn=dfn)


def garbe_ramp(g0: float, g_tau: float) -> RampProfile:
    """Critical-exponent comparison ramp: G(s) = sqrt(2 - 2/(s^2+1)) (g_tau-g0) + g0."""
    if not g0 < g_tau:
        raise RampSynthesisError(f"requires g0 < g_tau, got {g0} >= {g_tau}")
    g0, g_tau = float(g0), float(g_tau)
    span = g_tau - g0

    def fn(s):
        s = np.asarray(s, dtype=float)
        return np.sqrt(2.0 - 2.0 / (s * s + 1.0)) * span + g0

    def dfn(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        u = 2.0 - 2.0 / (s * s + 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = span * (4.0 * s / (s * s + 1.0) ** 2) / (2.0 * np.sqrt(u))
        # sqrt(u) ~ sqrt(2) s near s = 0
        d = np.where(s == 0.0, math.sqrt(2.0) * span, d)
        return d

    return RampProfile(g0=g0, g_tau=g_tau, tag="garbe", _fn=fn, _dfn=dfn)


# ---------------------------------------------------------------------------
# Numeric Euler-Lagrange solver
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = leggauss(7)
_GL_NODES_FINE, _GL_WEIGHTS_FINE = leggauss(21)


def _cell_quadrature(fn, left, width):
    """7-point Gauss-Legendre over [left, left+width], vectorized over cells."""
    left = np.atleast_1d(left)
    width = np.atleast_1d(width)
    x = left[:, None] + (0.5 * (_GL_NODES + 1.0))[None, :] * width[:, None]
    vals = fn(x)
    if not np.all(np.isfinite(vals)):
        raise ELSolverError("sqrt action density not finite on quadrature nodes")
    return 0.5 * width * (vals @ _GL_WEIGHTS)


def solve_euler_lagrange(
    model: ActionModel, g0: float, g_tau: float, grid_size: int = 2001
) -> RampProfile:
    """Solve the minimal-action boundary-value problem by first-integral quadrature.

    The conserved quantity A(G) G'^2 turns the Euler-Lagrange equation into
    s(g) proportional to the cumulative integral of sqrt(A); the profile is
    its monotone inverse, evaluated by safeguarded Newton iteration on the
    cumulative quadrature (exact first-integral derivative dG/ds = I/sqrt(A)).
    """
    if grid_size < 11:
        raise RampSynthesisError(f"grid_size must be >= 11, got {grid_size}")
    if g0 == g_tau:
        return constant_ramp(g0)
    g0, g_tau = float(g0), float(g_tau)
    span = g_tau - g0

    def w(x):
        # sqrt(A) along the path, parametrized by x in [0, 1]
        return model.sqrt_density(g0 + span * np.asarray(x, dtype=float))

    n_cells = grid_size - 1
    x_nodes = np.linspace(0.0, 1.0, grid_size)
    widths = np.diff(x_nodes)
    cells = _cell_quadrature(w, x_nodes[:-1], widths)
    if np.any(cells < 0):
        raise ELSolverError("sqrt action density produced negative cell integrals")
    prefix = np.concatenate([[0.0], np.cumsum(cells)])
    total = prefix[-1]
    if not (np.isfinite(total) and total > 0):
        raise ELSolverError("action density integral is zero or divergent on the interval")
    # refine the dominant cells with a higher-order rule: a systematic shift
    # flags a (near-)singular, non-integrable density
    top = np.argsort(cells)[-8:]
    x_f = x_nodes[top][:, None] + (0.5 * (_GL_NODES_FINE + 1.0))[None, :] * widths[top][:, None]
    fine = 0.5 * widths[top] * (np.nan_to_num(w(x_f), nan=np.inf, posinf=np.inf) @ _GL_WEIGHTS_FINE)
    if not np.all(np.isfinite(fine)) or np.sum(np.abs(fine - cells[top])) > 1e-6 * total:
        raise ELSolverError("sqrt action density appears non-integrable (divergent quadrature)")
    s_nodes = prefix / total
    if np.any(np.diff(s_nodes) <= 0):
        raise ELSolverError("degenerate (locally zero) action density: inversion impossible")
    guess = PchipInterpolator(s_nodes, x_nodes)

    def s_of_x(x):
        """Normalized cumulative integral, continuous in x (prefix + partial cell)."""
        x = np.asarray(x, dtype=float)
        idx = np.clip((x * n_cells).astype(int), 0, n_cells - 1)
        left = x_nodes[idx]
        part = _cell_quadrature(w, left, x - left)
        return (prefix[idx] + part) / total

    def invert(s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        x = np.clip(guess(s), 0.0, 1.0)
        for _ in range(12):
            resid = s_of_x(x) - s
            if np.max(np.abs(resid)) < 1e-14:
                break
            dens = w(x)
            dens = np.where(dens > 0, dens, np.inf)  # skip isolated zero-density points
            x = np.clip(x - resid * total / dens, 0.0, 1.0)
        return x

    def fn(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        g = g0 + span * invert(s)
        g[s <= 0.0] = g0
        g[s >= 1.0] = g_tau
        return g

    def dfn(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return span * total / w(invert(s))

    s_grid = np.linspace(0.0, 1.0, grid_size)
    samples = np.column_stack([s_grid, fn(s_grid)])
    return RampProfile(
        g0=g0, g_tau=g_tau, tag="numeric-EL", _fn=fn, _dfn=dfn, samples=samples
    )


# ---------------------------------------------------------------------------
# Action evaluation
# ---------------------------------------------------------------------------

def evaluate_action(model: ActionModel, ramp: RampProfile, tau: float) -> float:
    """Adiabatic action S = (1/tau) int_0^1 c(G) G'^2 / Gamma(G)^4 ds.

    Uses adaptive quadrature (abs tol 1e-10, rel tol 1e-9).  Raises
    :class:`ActionQuadratureError` with the estimate if the quadrature does
    not converge.
    """
    if not tau > 0:
        raise RampSynthesisError(f"tau must be positive, got {tau}")
    if ramp.g0 == ramp.g_tau and ramp.samples is None:
        return 0.0

    def integrand(s):
        g = ramp(s)
        d = ramp.derivative(s)
        return float(model.weight(g) * d * d / model.gap(g) ** 4)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(
            integrand, 0.0, 1.0, epsabs=1e-10, epsrel=1e-9, limit=300
        )
    flagged = any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    if flagged and err > 1e-6 * max(1.0, abs(val)):
        raise ActionQuadratureError(
            f"action quadrature did not converge: estimate {val} +- {err}",
            estimate=val / tau,
            error=err / tau,
        )
    return val / tau
