"""Logical state-vector machine for the amplitude-amplification search.

States live on 2^n complex amplitudes (qubit 1 = most significant bit)
plus a scalar `leaked` that accumulates the squared norm removed by
non-unitary diagonal gates.  One search iteration is

    oracle diagonal -> Hadamard on all qubits -> zero-flip diagonal
    -> Hadamard on all qubits,

which equals the textbook Grover step up to an unobservable global sign
when both diagonals are ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import (
    CpfDiagonal,
    GateParams,
    bitstring_to_index,
    build_ideal_cpf,
    build_noisy_cpf,
    mask_conjugate,
)


@dataclass(frozen=True)
class LogicalState:
    """2^n logical amplitudes plus accumulated leaked weight."""

    n: int
    amps: np.ndarray
    leaked: float = 0.0

    def __post_init__(self):
        if self.amps.shape != (2**self.n,):
            raise ValueError(
                f"state for n={self.n} needs {2**self.n} amplitudes, "
                f"got shape {self.amps.shape}"
            )
        self.amps.setflags(write=False)

    def survival(self) -> float:
        """Squared norm still inside the logical subspace."""
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True)
class TraceRow:
    k: int
    p_success: float
    survival: float

    @property
    def p_conditional(self) -> float:
        """Success probability conditioned on the run surviving."""
        return self.p_success / self.survival if self.survival > 0 else 0.0


@dataclass(frozen=True)
class SearchTrace:
    marked: str
    params: GateParams | None
    rows: tuple[TraceRow, ...]


def uniform_state(n: int) -> LogicalState:
    """Equal superposition of all 2^n basis states."""
    if n < 1:
        raise ValueError(f"need at least 1 qubit, got n={n}")
    amps = np.full(2**n, 2.0 ** (-n / 2), dtype=complex)
    return LogicalState(n=n, amps=amps)


def hadamard_all(state: LogicalState) -> LogicalState:
    """Apply the Hadamard to every qubit.

    Runs the unnormalized butterfly per qubit and rescales once by
    2^(-n/2); for even n the scale is an exact power of two, so the
    transform is exact on dyadic-rational amplitudes.
    """
    n = state.n
    v = state.amps
    for q in range(n):
        v = v.reshape(2**q, 2, -1)
        v = np.stack([v[:, 0, :] + v[:, 1, :], v[:, 0, :] - v[:, 1, :]], axis=1)
    amps = v.reshape(-1) * 2.0 ** (-n / 2)
    return LogicalState(n=n, amps=amps, leaked=state.leaked)


def apply_diagonal(state: LogicalState, diag: CpfDiagonal) -> LogicalState:
    """Multiply amplitudes entrywise; book the lost norm into `leaked`."""
    if diag.n != state.n:
        raise ValueError(f"diagonal is for n={diag.n}, state has n={state.n}")
    loss = float(np.sum((1.0 - diag.entries**2) * np.abs(state.amps) ** 2))
    return LogicalState(
        n=state.n,
        amps=state.amps * diag.entries,
        leaked=state.leaked + loss,
    )


def grover_iterate(
    state: LogicalState, oracle_diag: CpfDiagonal, zero_diag: CpfDiagonal
) -> LogicalState:
    """One search iteration: oracle, Hadamards, zero-flip, Hadamards."""
    state = apply_diagonal(state, oracle_diag)
    state = hadamard_all(state)
    state = apply_diagonal(state, zero_diag)
    state = hadamard_all(state)
    return state


def default_k_max(n: int) -> int:
    """Twice the ideal quarter-period, wide enough to show the post-peak dip."""
    return 2 * math.ceil(math.pi * 2 ** (n / 2) / 4.0)


def run_search(
    n: int,
    marked: str,
    params: GateParams | None = None,
    k_max: int | None = None,
) -> SearchTrace:
    """Iterate the search and record (k, p_success, survival) for k = 0..k_max.

    params = None runs ideal gates; otherwise both diagonals come from the
    dissipative gate model.  p_success is taken on the unnormalized state,
    so it prices amplitude concentration and no-jump survival jointly; the
    conditioned variant is available per row as p_conditional.
    """
    if k_max is None:
        k_max = default_k_max(n)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    target = bitstring_to_index(marked, n)
    if params is not None and params.n != n:
        raise ValueError(f"params are for n={params.n}, search has n={n}")

    zero_diag = build_ideal_cpf(n) if params is None else build_noisy_cpf(params)
    oracle_diag = mask_conjugate(zero_diag, marked)

    state = uniform_state(n)
    rows = [TraceRow(0, float(abs(state.amps[target]) ** 2), state.survival())]
    for k in range(1, k_max + 1):
        state = grover_iterate(state, oracle_diag, zero_diag)
        rows.append(
            TraceRow(k, float(abs(state.amps[target]) ** 2), state.survival())
        )
    return SearchTrace(marked=marked, params=params, rows=tuple(rows))


def optimal_iterations(trace: SearchTrace) -> tuple[int, float]:
    """Smallest iteration count reaching the trace's maximum success."""
    if not trace.rows:
        raise ValueError("trace has no rows")
    best = trace.rows[0]
    for row in trace.rows[1:]:
        if row.p_success > best.p_success:
            best = row
    return best.k, best.p_success
