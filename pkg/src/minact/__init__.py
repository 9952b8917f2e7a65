"""Minimal adiabatic-action control: ramp synthesis + exact propagation."""

__version__ = "0.1.0"

from .ramps import (
    ActionModel,
    RampProfile,
    RampSpec,
    RampSynthesisError,
    ActionQuadratureError,
    ELSolverError,
    linear_ramp,
    lz_optimal_ramp,
    family_optimal_ramp,
    ising_optimal_ramp,
    fc_optimal_ramp,
    garbe_ramp,
    solve_euler_lagrange,
    evaluate_action,
    gap_table_model,
)
from .models import (
    LandauZener,
    TwoLevelMode,
    IsingChain,
    FullyConnected,
    Timescales,
    lz_hamiltonian,
    lz_gap,
    tfim_subspaces,
    subspace_hamiltonian,
    fc_hamiltonian,
    fully_connected,
    ground_state,
    timescales,
    lz_action_model,
    ising_action_model,
    fc_action_model,
)
from .dynamics import (
    EvolutionResult,
    evolve,
    fidelity,
    tfim_fidelity,
    lz_formula_fidelity,
)
from .sweeps import (
    SweepSpec,
    SweepRow,
    SweepResult,
    ThresholdNotAttained,
    run_sweep,
    threshold_time,
)
