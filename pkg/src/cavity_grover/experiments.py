"""Experiment harness: quality sweeps, search sweeps, timing and placement.

Each sweep walks its grid in sorted order and emits one flat dict per grid
point, ready for CSV/JSON serialization.  All record values are plain
Python ints/floats so output is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    ChainSpec,
    closed_form_amplitudes,
    exact_cpf_action,
    integrate_subspace,
    velocity_error_gate,
)
from .gates import DomainError, GateParams, gate_time
from .search import optimal_iterations, run_search

# Rydberg-level lifetime used in timing budgets, seconds
ATOM_LIFETIME = 30e-3

DEFAULT_OMEGA1 = 2 * math.pi * 4900.0  # rad/s
DEFAULT_ETA = 10.0
DEFAULT_N = 10
DEFAULT_MARKED = "0011000000"


@dataclass(frozen=True)
class TimingBudget:
    """Wall-time budget of a full search at fixed gate parameters."""

    t0: float
    iterations: int
    total: float
    cavity_decay_time: float
    atom_lifetime: float = ATOM_LIFETIME


@dataclass(frozen=True)
class TrajectoryPlan:
    """Atom track coordinates through the standing-wave mode.

    Atom 1 is offset from an antinode so its coupling is Omega/eta; the
    spectators cross at antinodes.  The mode waist and radial offset are
    carried as metadata only (the transverse factor is approximated to 1).
    """

    lambda0: float
    z: tuple[float, ...]
    coupling_factor: tuple[float, ...]
    waist: float | None = None
    radial_offset: float | None = None


def gate_quality(params: GateParams) -> tuple[float, float]:
    """Fidelity and success probability of one gate on the uniform state.

    The exact gate action (leakage included) is applied per basis
    component; F is the squared overlap of the resulting state with the
    ideal phase flip applied to the same input, norm loss included, and P
    is the surviving squared norm.  Leaked amplitude contributes zero
    overlap to F but full weight to P.
    """
    n = params.n
    dim = 2**n
    frozen = dim // 2  # states with qubit 1 in logical 1

    overlap = complex(frozen)
    norm_sq = float(frozen)
    for m in range(n):
        count = math.comb(n - 1, m)
        action = exact_cpf_action(params, (1 << m) - 1)
        ideal_entry = -1.0 if m == 0 else 1.0
        overlap += count * ideal_entry * action.diag_amp
        norm_sq += count * (abs(action.diag_amp) ** 2 + action.leak_weight)

    p_success = norm_sq / dim
    fidelity = abs(overlap / dim) ** 2
    return fidelity, p_success


def gate_quality_sweep(
    eta_values, mu_values, n: int = DEFAULT_N, omega1: float = DEFAULT_OMEGA1
) -> list[dict]:
    """Gate fidelity F and survival P over an (eta, mu) grid."""
    records = []
    for eta in sorted(eta_values):
        for mu in sorted(mu_values):
            f, p = gate_quality(GateParams(n=n, omega1=omega1, eta=eta, mu=mu))
            records.append(
                {"eta": float(eta), "mu": float(mu), "fidelity": f, "p_success": p}
            )
    return records


def search_sweep(
    n: int = DEFAULT_N,
    marked: str = DEFAULT_MARKED,
    mu_values=(0.0, 0.05, 0.1),
    eta: float = DEFAULT_ETA,
    k_max: int = 40,
    omega1: float = DEFAULT_OMEGA1,
) -> list[dict]:
    """Search-probability traces over iteration count, one row per (mu, k)."""
    records = []
    for mu in sorted(mu_values):
        params = GateParams(n=n, omega1=omega1, eta=eta, mu=mu)
        trace = run_search(n, marked, params, k_max)
        for row in trace.rows:
            records.append(
                {
                    "mu": float(mu),
                    "k": row.k,
                    "p_success": row.p_success,
                    "survival": row.survival,
                    "p_conditional": row.p_conditional,
                }
            )
    return records


def delay_error_sweep(
    delta_ts,
    mu_values=(0.05, 0.1),
    eta: float = DEFAULT_ETA,
    n: int = DEFAULT_N,
    omega1: float = DEFAULT_OMEGA1,
) -> list[dict]:
    """Gate infidelity versus control-atom time delay, one row per (mu, delta_t).

    The quality formula matches gate_quality with the two-stage delayed
    action in place of the exact one-gate action.
    """
    if any(dt < 0 for dt in delta_ts):
        raise ValueError("delta_t values must be non-negative")
    records = []
    for mu in sorted(mu_values):
        params = GateParams(n=n, omega1=omega1, eta=eta, mu=mu)
        for dt in sorted(delta_ts):
            actions = velocity_error_gate(params, dt)
            dim = 2**n
            ideal = np.ones(dim)
            ideal[0] = -1.0
            overlap = sum(
                ideal[s] * actions[s].diag_amp for s in range(dim)
            )
            fidelity = abs(overlap / dim) ** 2
            records.append(
                {
                    "eta": float(eta),
                    "mu": float(mu),
                    "delta_t_us": float(dt * 1e6),
                    "infidelity": 1.0 - fidelity,
                }
            )
    return records


def timing_budget(
    n: int,
    omega1: float,
    mu: float,
    iterations: int | None = None,
) -> TimingBudget:
    """Total search time for a given iteration count.

    Single-qubit rotations are taken as instantaneous, so the total is
    2 * iterations * t0.  Without an explicit count, the ideal
    quarter-period ceil(pi * 2^(n/2) / 4) is used; callers that ran a
    search should pass its optimum instead.
    """
    params = GateParams(n=n, omega1=omega1, eta=DEFAULT_ETA, mu=mu)
    t0 = gate_time(params)
    if iterations is None:
        iterations = math.ceil(math.pi * 2 ** (n / 2) / 4.0)
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    kappa = params.kappa
    decay_time = 2 * math.pi / kappa if kappa > 0 else math.inf
    return TimingBudget(
        t0=t0,
        iterations=iterations,
        total=2 * iterations * t0,
        cavity_decay_time=decay_time,
    )


def trajectory_plan(
    n: int,
    lambda0: float,
    eta: float,
    waist: float | None = None,
    radial_offset: float | None = None,
) -> TrajectoryPlan:
    """Track coordinates giving atom 1 coupling Omega/eta and spectators Omega.

    Atom 1 crosses the mode offset from an antinode by
    (lambda0/2pi) * arccos(1/eta); atoms 2..n cross at consecutive
    antinodes.  Only even atom counts are laid out.
    """
    if n < 2 or n % 2:
        raise DomainError(f"trajectory layout requires an even atom count, got {n}")
    if lambda0 <= 0:
        raise ValueError(f"lambda0 must be positive, got {lambda0}")
    if eta <= 1:
        raise DomainError(
            f"eta={eta} <= 1: arccos(1/eta) undefined, no offset exists"
        )
    half = n // 2
    z = [-half * lambda0 + lambda0 / (2 * math.pi) * math.acos(1.0 / eta)]
    z += [(-half + (j - 1)) * lambda0 for j in range(2, n + 1)]
    factors = [math.cos(2 * math.pi * zj / lambda0) for zj in z]
    return TrajectoryPlan(
        lambda0=lambda0,
        z=tuple(z),
        coupling_factor=tuple(factors),
        waist=waist,
        radial_offset=radial_offset,
    )


def optimal_search_iterations(
    n: int, marked: str, mu: float, eta: float, k_max: int, omega1: float
) -> int:
    """Iteration count maximizing the search trace's success probability."""
    params = GateParams(n=n, omega1=omega1, eta=eta, mu=mu)
    k_star, _ = optimal_iterations(run_search(n, marked, params, k_max))
    return max(k_star, 1)


def dynamics_crosscheck(
    m_values=(1, 5, 9),
    mu_values=(0.0, 0.05, 0.1),
    t_factors=(0.5, 1.0, 2.0),
    eta: float = DEFAULT_ETA,
    omega1: float = DEFAULT_OMEGA1,
) -> list[dict]:
    """Closed forms versus the RK4 integrator on a (m, mu, t) grid.

    One record per grid point with the maximum per-component deviation;
    the suite requires every deviation below 1e-8.
    """
    records = []
    for m in sorted(m_values):
        for mu in sorted(mu_values):
            chain = ChainSpec(
                omega1=omega1,
                couplings=(eta * omega1,) * m,
                kappa=mu * omega1,
            )
            t0 = gate_time(GateParams(n=m + 1, omega1=omega1, eta=eta, mu=mu))
            for factor in sorted(t_factors):
                t = factor * t0
                analytic = closed_form_amplitudes(chain, t)
                expected = np.concatenate(
                    ([analytic.c_self], analytic.c_leak, [analytic.c_photon])
                )
                initial = np.zeros(m + 2, dtype=complex)
                initial[0] = 1.0
                integrated = integrate_subspace(chain, t, initial)
                records.append(
                    {
                        "m": m,
                        "mu": float(mu),
                        "t_factor": float(factor),
                        "max_component_error": float(
                            np.max(np.abs(expected - integrated))
                        ),
                    }
                )
    return records
