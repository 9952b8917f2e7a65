"""Hamiltonians, gaps, ground states and timescales for the three case studies.

Units: hbar = 1 and energies in units of omega (Delta for the two-level
avoided crossing).  The Ising chain is handled through its N/2 decoupled
momentum-pair subspaces; the fully connected bosonic model through exact
diagonalization of the even-parity truncated Fock sector.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ramps import ActionModel

__all__ = [
    "SIGMA_X",
    "SIGMA_Z",
    "LandauZener",
    "TwoLevelMode",
    "IsingChain",
    "FullyConnected",
    "Timescales",
    "DegenerateGroundStateWarning",
    "TruncationError",
    "lz_hamiltonian",
    "lz_gap",
    "tfim_subspaces",
    "subspace_hamiltonian",
    "subspace_gap",
    "fc_hamiltonian",
    "fc_thermodynamic_gap",
    "fully_connected",
    "ground_state",
    "timescales",
    "lz_action_model",
    "ising_action_model",
    "fc_action_model",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


class DegenerateGroundStateWarning(UserWarning):
    """Lowest eigenvalue degenerate within 1e-12."""


class TruncationError(RuntimeError):
    """Fock-space truncation too small for the requested sweep."""


# ---------------------------------------------------------------------------
# Landau-Zener
# ---------------------------------------------------------------------------

def lz_hamiltonian(g: float, delta: float) -> np.ndarray:
    """H = Delta sigma_x + g sigma_z (hbar = 1)."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return delta * SIGMA_X + g * SIGMA_Z


def lz_gap(g, delta):
    """Gap 2 sqrt(g^2 + Delta^2) between the two levels."""
    g = np.asarray(g, dtype=float)
    return 2.0 * np.sqrt(g * g + delta * delta)


@dataclass(frozen=True)
class LandauZener:
    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    def hamiltonian(self, g: float) -> np.ndarray:
        return lz_hamiltonian(g, self.delta)

    def gap(self, g):
        return lz_gap(g, self.delta)


# ---------------------------------------------------------------------------
# Transverse-field Ising chain via momentum subspaces
# ---------------------------------------------------------------------------

def subspace_hamiltonian(k: float, g: float, omega: float = 1.0) -> np.ndarray:
    """2x2 Bogoliubov block H_k = 2 omega [(g - cos k) sigma_z + sin k sigma_x]."""
    return 2.0 * omega * ((g - math.cos(k)) * SIGMA_Z + math.sin(k) * SIGMA_X)


def subspace_gap(k: float, g, omega: float = 1.0):
    """Gamma_k = 4 omega sqrt(g^2 - 2 g cos k + 1)."""
    g = np.asarray(g, dtype=float)
    return 4.0 * omega * np.sqrt(g * g - 2.0 * g * math.cos(k) + 1.0)


@dataclass(frozen=True)
class TwoLevelMode:
    """One momentum-pair subspace of the chain, an effective avoided crossing."""

    k: float
    omega: float = 1.0

    def hamiltonian(self, g: float) -> np.ndarray:
        return subspace_hamiltonian(self.k, g, self.omega)

    def gap(self, g):
        return subspace_gap(self.k, g, self.omega)


@dataclass(frozen=True)
class IsingChain:
    N: int
    omega: float = 1.0

    def __post_init__(self):
        if self.N != int(self.N) or int(self.N) % 2 or int(self.N) < 4:
            raise ValueError(f"N must be an even integer >= 4, got {self.N}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    def subspaces(self) -> tuple[TwoLevelMode, ...]:
        return tfim_subspaces(self)


def tfim_subspaces(chain: IsingChain) -> tuple[TwoLevelMode, ...]:
    """The N/2 decoupled subspaces at k_n = (2n - 1) pi / N, n = 1..N/2."""
    N = int(chain.N)
    return tuple(
        TwoLevelMode(k=(2 * n - 1) * math.pi / N, omega=chain.omega)
        for n in range(1, N // 2 + 1)
    )


# ---------------------------------------------------------------------------
# Fully connected bosonic model (even-parity Fock sector)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _even_sector_ops(n_max: int):
    """Number operator and (a + a^dag)^2, (a + a^dag)^4 restricted to even Fock levels."""
    dim = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    x = a + a.T
    x2 = x @ x
    x4 = x2 @ x2
    even = np.arange(0, dim, 2)
    return (
        np.diag(np.arange(dim, dtype=float))[np.ix_(even, even)],
        x2[np.ix_(even, even)],
        x4[np.ix_(even, even)],
    )


@dataclass(frozen=True)
class FullyConnected:
    """Effective bosonic model with quadratic softening and quartic confinement."""

    eta: float
    n_max: int = 160
    omega: float = 1.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.n_max % 2 or self.n_max < 8:
            raise ValueError(f"n_max must be an even integer >= 8, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max // 2 + 1

    def operators(self):
        return _even_sector_ops(self.n_max)

    def hamiltonian(self, g: float) -> np.ndarray:
        return fc_hamiltonian(g, self)

    def gap(self, g):
        return fc_thermodynamic_gap(g, self.omega)


def fc_hamiltonian(g: float, model: FullyConnected) -> np.ndarray:
    """H = omega a^dag a - (omega g^2/4)(a+a^dag)^2 + (omega g^4/16 eta)(a+a^dag)^4,

    restricted to the even-parity sector of the truncated Fock basis
    (couplings change the occupation by 0, +-2, +-4 only).
    """
    if not 0 <= g < 1:
        raise ValueError(f"g must lie in [0, 1), got {g}")
    nmat, x2, x4 = model.operators()
    w = model.omega
    return w * (nmat - (g * g / 4.0) * x2 + (g ** 4 / (16.0 * model.eta)) * x4)


def fc_thermodynamic_gap(g, omega: float = 1.0):
    """Thermodynamic-limit gap 2 omega sqrt(1 - g^2), the synthesis estimate."""
    g = np.asarray(g, dtype=float)
    return 2.0 * omega * np.sqrt(1.0 - g * g)


def fully_connected(
    eta: float, g_max: float = 0.9, n_max: int = 160, omega: float = 1.0
) -> FullyConnected:
    """Construct a model with the truncation auto-doubled until converged.

    Doubles n_max until the ground state at g_max carries < 1e-10 population
    on the top two retained even levels.
    """
    while n_max <= 4096:
        model = FullyConnected(eta=eta, n_max=n_max, omega=omega)
        _, vec = ground_state(fc_hamiltonian(g_max, model))
        if float(np.sum(np.abs(vec[-2:]) ** 2)) < 1e-10:
            return model
        n_max *= 2
    raise TruncationError(f"no converged truncation below n_max = 4096 for eta = {eta}")


# ---------------------------------------------------------------------------
# Ground states and timescales
# ---------------------------------------------------------------------------

def ground_state(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of a Hermitian matrix.

    The eigenvector's global phase is fixed by making its largest-magnitude
    amplitude real and positive.  A degenerate lowest eigenvalue (within
    1e-12) is flagged with :class:`DegenerateGroundStateWarning`.
    """
    H = np.asarray(H)
    if not np.allclose(H, H.conj().T, atol=1e-12):
        raise ValueError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(H)
    if H.shape[0] > 1 and vals[1] - vals[0] < 1e-12:
        warnings.warn(
            f"ground state degenerate: gap {vals[1] - vals[0]:.3e}",
            DegenerateGroundStateWarning,
        )
    vec = vecs[:, 0]
    idx = int(np.argmax(np.abs(vec)))
    phase = vec[idx] / abs(vec[idx])
    vec = vec * np.conj(phase)
    return float(vals[0]), vec


@dataclass(frozen=True)
class Timescales:
    tau_a: float
    tau_l: float | None = None


def timescales(system, g_max: float | None = None) -> Timescales:
    """Heuristic minimal durations for near-adiabatic transfer.

    Landau-Zener: tau_a = 1/Delta.  Ising chain: tau_a = 1/[4 omega sin(pi/N)]
    plus the locality bound tau_l = N/(4 omega).  Fully connected:
    tau_a = 1/[2 omega sqrt(1 - g_max)] with g_max the largest control value
    reached (no locality bound: all-to-all couplings).
    """
    if isinstance(system, LandauZener):
        return Timescales(tau_a=1.0 / system.delta)
    if isinstance(system, IsingChain):
        w, N = system.omega, system.N
        return Timescales(tau_a=1.0 / (4.0 * w * math.sin(math.pi / N)), tau_l=N / (4.0 * w))
    if isinstance(system, FullyConnected):
        if g_max is None:
            raise ValueError("g_max required for the fully connected timescale")
        if not g_max < 1:
            raise ValueError(f"g_max must be < 1, got {g_max}")
        return Timescales(tau_a=1.0 / (2.0 * system.omega * math.sqrt(1.0 - g_max)))
    raise TypeError(f"unsupported system {type(system).__name__}")


# ---------------------------------------------------------------------------
# Built-in action models (weights match the per-model action densities)
# ---------------------------------------------------------------------------

def lz_action_model(delta: float = 1.0) -> ActionModel:
    """c = 2, Gamma = 2 sqrt(g^2 + Delta^2): density g'^2 / [8 (Delta^2 + g^2)^2]."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return ActionModel(
        weight=lambda g: np.full_like(np.asarray(g, dtype=float), 2.0),
        gap=lambda g: lz_gap(g, delta),
    )


def ising_action_model(N: int, omega: float = 1.0) -> ActionModel:
    """Lowest-subspace estimate: c = 8 omega^2, Gamma = Gamma_{k=pi/N}.

    Gives the density g'^2 / {32 omega^2 [g^2 - 2 g cos(pi/N) + 1]^2}.
    """
    chain = IsingChain(N=N, omega=omega)  # validates N, omega
    k = math.pi / chain.N
    return ActionModel(
        weight=lambda g: np.full_like(np.asarray(g, dtype=float), 8.0 * omega * omega),
        gap=lambda g: subspace_gap(k, g, omega),
    )


def fc_action_model(omega: float = 1.0) -> ActionModel:
    """Thermodynamic-gap estimate: c = 16 omega^2 g^2, Gamma = 2 omega sqrt(1 - g^2).

    Gives the density g^2 g'^2 / [omega^2 (1 - g^2)^2], valid on (0, 1).
    """
    return ActionModel(
        weight=lambda g: 16.0 * omega * omega * np.asarray(g, dtype=float) ** 2,
        gap=lambda g: fc_thermodynamic_gap(g, omega),
        domain=(0.0, 1.0),
    )
