"""Simulator for an n-qubit amplitude-amplification search built on
dissipative cavity-mediated conditional phase flips.

Layers: `gates` (closed-form diagonal gate model), `dynamics` (exact
one-excitation evolution and the RK4 oracle), `search` (logical
state-vector machine), `experiments` (sweep harness), `records` and
`cli` (deterministic data emission).
"""

from .dynamics import (
    ChainSpec,
    ClosedFormResult,
    GateAction,
    closed_form_amplitudes,
    exact_cpf_action,
    integrate_subspace,
    velocity_error_gate,
)
from .gates import (
    CpfCoefficients,
    CpfDiagonal,
    DomainError,
    GateParams,
    build_ideal_cpf,
    build_noisy_cpf,
    cpf_coefficients,
    gate_time,
    mask_conjugate,
)
from .search import (
    LogicalState,
    SearchTrace,
    TraceRow,
    apply_diagonal,
    grover_iterate,
    hadamard_all,
    optimal_iterations,
    run_search,
    uniform_state,
)
from .experiments import (
    TimingBudget,
    TrajectoryPlan,
    delay_error_sweep,
    dynamics_crosscheck,
    gate_quality,
    gate_quality_sweep,
    search_sweep,
    timing_budget,
    trajectory_plan,
)

__all__ = [
    "ChainSpec",
    "ClosedFormResult",
    "CpfCoefficients",
    "CpfDiagonal",
    "DomainError",
    "GateAction",
    "GateParams",
    "LogicalState",
    "SearchTrace",
    "TimingBudget",
    "TraceRow",
    "TrajectoryPlan",
    "apply_diagonal",
    "build_ideal_cpf",
    "build_noisy_cpf",
    "closed_form_amplitudes",
    "cpf_coefficients",
    "delay_error_sweep",
    "dynamics_crosscheck",
    "exact_cpf_action",
    "gate_quality",
    "gate_quality_sweep",
    "gate_time",
    "grover_iterate",
    "hadamard_all",
    "integrate_subspace",
    "mask_conjugate",
    "optimal_iterations",
    "run_search",
    "search_sweep",
    "timing_budget",
    "trajectory_plan",
    "uniform_state",
    "velocity_error_gate",
]

__version__ = "0.1.0"
