"""Ground-truth dynamics of the atom-cavity chain in the one-excitation sector.

The register couples a control atom (coupling omega1) and m spectator atoms
(couplings Omega_k) to one damped cavity mode.  Starting from the control
excited and the cavity empty, the state stays inside the m+2 dimensional
subspace spanned by

    |control excited; vacuum>,  |spectator k excited; vacuum>,  |one photon>,

and evolves under the non-Hermitian (no-photon-emission) Hamiltonian.  Two
independent routes through that evolution live here:

* closed_form_amplitudes -- the analytic solution.  With the bright-mode
  envelope E(t) = exp(-kappa t/4) (cos(A t) + kappa/(4A) sin(A t)),
  G^2 = omega1^2 + sum Omega_k^2 and A = sqrt(G^2 - kappa^2/16),

      c_self   = (omega1^2/G^2) E(t) + (G^2 - omega1^2)/G^2
      c_leak_k = (omega1 Omega_k / G^2) (E(t) - 1)
      c_photon = -i (omega1/A) exp(-kappa t/4) sin(A t)

  The leak prefactor omega1*Omega_k/G^2 and the damping factor on the
  photon amplitude are required by norm conservation at kappa = 0 and by
  the constant of motion Omega_k*c_self - omega1*c_leak_k (checked in the
  test suite against the integrator).

* integrate_subspace -- fixed-step classical 4th-order integration of the
  same Hamiltonian, used as the numerical oracle for the closed forms.

exact_cpf_action and velocity_error_gate package these amplitudes per
logical basis state for the gate and experiment layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gates import DomainError, GateParams, gate_time

# refine the integrator step until halving changes no component more than this
INTEGRATOR_TOL = 1e-10


@dataclass(frozen=True)
class ChainSpec:
    """One control atom, m spectator couplings, and the cavity decay rate.

    couplings holds Omega_k for the spectators that sit in the coupled
    level; zero entries are allowed (decoupled atom, frozen amplitude).
    """

    omega1: float
    couplings: tuple[float, ...]
    kappa: float = 0.0

    def __post_init__(self):
        if self.omega1 < 0:
            raise ValueError(f"omega1 must be non-negative, got {self.omega1}")
        if any(c < 0 for c in self.couplings):
            raise ValueError("couplings must be non-negative")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")

    @property
    def m(self) -> int:
        return len(self.couplings)

    @property
    def g_total(self) -> float:
        """Bright-mode coupling G = sqrt(omega1^2 + sum Omega_k^2)."""
        return math.sqrt(self.omega1**2 + sum(c**2 for c in self.couplings))


@dataclass(frozen=True)
class ClosedFormResult:
    """Analytic no-jump amplitudes at one instant.

    c_self    amplitude left on the initial (control excited) state
    c_leak    amplitudes on the spectator-excited states, one per coupling
    c_photon  amplitude on the one-photon state
    g_m       bright-mode coupling, rad/s
    a_decay   damped oscillation frequency sqrt(G^2 - kappa^2/16), rad/s
    """

    c_self: complex
    c_leak: np.ndarray
    c_photon: complex
    g_m: float
    a_decay: float

    def total_norm_sq(self) -> float:
        return (
            abs(self.c_self) ** 2
            + float(np.sum(np.abs(self.c_leak) ** 2))
            + abs(self.c_photon) ** 2
        )

    def leak_weight(self) -> float:
        """Squared amplitude outside the initial state (spectators + photon)."""
        return float(np.sum(np.abs(self.c_leak) ** 2)) + abs(self.c_photon) ** 2


@dataclass(frozen=True)
class GateAction:
    """Per-basis-state effect of one gate: retained amplitude + lost weight."""

    diag_amp: complex
    leak_weight: float


def closed_form_amplitudes(chain: ChainSpec, t: float) -> ClosedFormResult:
    """Analytic one-excitation amplitudes after time t (no-jump branch)."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    g = chain.g_total
    if g <= 0:
        raise DomainError("closed forms need a coupled chain (G > 0)")
    if chain.kappa >= 4.0 * g:
        raise DomainError(
            f"kappa={chain.kappa} >= 4G={4*g}: overdamped regime not supported"
        )
    a = math.sqrt(g**2 - chain.kappa**2 / 16.0)
    damp = math.exp(-chain.kappa * t / 4.0)
    envelope = damp * (
        math.cos(a * t) + chain.kappa / (4.0 * a) * math.sin(a * t)
    )
    w1 = chain.omega1
    c_self = (w1**2 / g**2) * envelope + (g**2 - w1**2) / g**2
    c_leak = np.array(
        [(w1 * wk / g**2) * (envelope - 1.0) for wk in chain.couplings],
        dtype=complex,
    )
    c_photon = -1j * (w1 / a) * damp * math.sin(a * t)
    return ClosedFormResult(
        c_self=complex(c_self),
        c_leak=c_leak,
        c_photon=complex(c_photon),
        g_m=g,
        a_decay=a,
    )


def _hamiltonian(chain: ChainSpec) -> np.ndarray:
    """Non-Hermitian Hamiltonian on [control, spectators..., photon]."""
    dim = chain.m + 2
    h = np.zeros((dim, dim), dtype=complex)
    h[0, -1] = h[-1, 0] = chain.omega1
    for k, wk in enumerate(chain.couplings):
        h[1 + k, -1] = h[-1, 1 + k] = wk
    h[-1, -1] = -0.5j * chain.kappa
    return h


def _rk4_step_matrix(a_mat: np.ndarray, h: float) -> np.ndarray:
    """One-step update matrix of classical RK4 for the linear system y' = A y.

    For a constant A the RK4 update is exactly the quartic Taylor polynomial
    I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24 applied to y.
    """
    dim = a_mat.shape[0]
    za = h * a_mat
    step = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 5):
        term = term @ za / k
        step = step + term
    return step


def integrate_subspace(
    chain: ChainSpec,
    t: float,
    initial: np.ndarray,
    tol: float = INTEGRATOR_TOL,
) -> np.ndarray:
    """Propagate one-excitation amplitudes for time t with fixed-step RK4.

    The system is linear and time-invariant, so N steps of classical RK4
    equal the N-th power of the one-step update matrix; the power is taken
    by binary exponentiation.  The step starts at t/10^4 or finer and is
    halved until another halving changes no component by more than `tol`;
    the finer solution is returned.
    """
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (chain.m + 2,):
        raise ValueError(
            f"initial must have {chain.m + 2} amplitudes, got shape {initial.shape}"
        )
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return initial.copy()

    a_mat = -1j * _hamiltonian(chain)
    # phase-error heuristic: RK4 drift ~ N (G t / N)^5 / 120, target 1e-12
    w = (chain.g_total + chain.kappa) * t
    n_steps = max(10_000, math.ceil(w**1.25 / (120.0 * 1e-12) ** 0.25))

    def propagate(n: int) -> np.ndarray:
        step = _rk4_step_matrix(a_mat, t / n)
        return np.linalg.matrix_power(step, n) @ initial

    coarse = propagate(n_steps)
    for _ in range(20):
        fine = propagate(2 * n_steps)
        if np.max(np.abs(fine - coarse)) <= tol:
            return fine
        coarse = fine
        n_steps *= 2
    raise RuntimeError("integrator failed to converge")  # pragma: no cover


@lru_cache(maxsize=None)
def _action_by_spectators(params: GateParams, m: int) -> GateAction:
    chain = ChainSpec(
        omega1=params.omega1,
        couplings=(params.omega_spectator,) * m,
        kappa=params.kappa,
    )
    result = closed_form_amplitudes(chain, gate_time(params))
    return GateAction(
        diag_amp=complex(result.c_self.real), leak_weight=result.leak_weight()
    )


def exact_cpf_action(params: GateParams, s: int) -> GateAction:
    """Exact gate action on basis index s, leakage included.

    States with qubit 1 in logical 1 hold no excitation and are frozen.
    Otherwise the control atom plus the m coupled spectators evolve for one
    gate time; the retained amplitude is the closed-form self amplitude and
    the leak weight collects everything else.
    """
    n = params.n
    if not 0 <= s < 2**n:
        raise ValueError(f"basis index {s} out of range for n={n}")
    if (s >> (n - 1)) & 1:
        return GateAction(diag_amp=1.0 + 0.0j, leak_weight=0.0)
    m = int(s & ((1 << (n - 1)) - 1)).bit_count()
    return _action_by_spectators(params, m)


def velocity_error_gate(params: GateParams, delta_t: float) -> list[GateAction]:
    """Gate action when the control atom stays coupled delta_t too long.

    Stage 1: full chain for one gate time.  Stage 2: spectators decouple
    (amplitudes frozen) while the control atom keeps exchanging with the
    still-damped cavity mode for delta_t.  Returned per basis index.
    """
    if delta_t < 0:
        raise ValueError(f"delta_t must be non-negative, got {delta_t}")
    n = params.n
    t0 = gate_time(params)

    by_m: list[GateAction] = []
    for m in range(n):
        chain = ChainSpec(
            omega1=params.omega1,
            couplings=(params.omega_spectator,) * m,
            kappa=params.kappa,
        )
        initial = np.zeros(m + 2, dtype=complex)
        initial[0] = 1.0
        state = integrate_subspace(chain, t0, initial)
        if delta_t > 0:
            lone = ChainSpec(
                omega1=params.omega1, couplings=(0.0,) * m, kappa=params.kappa
            )
            state = integrate_subspace(lone, delta_t, state)
        by_m.append(
            GateAction(
                diag_amp=complex(state[0]),
                leak_weight=float(np.sum(np.abs(state[1:]) ** 2)),
            )
        )

    frozen = GateAction(diag_amp=1.0 + 0.0j, leak_weight=0.0)
    actions = []
    for s in range(2**n):
        if (s >> (n - 1)) & 1:
            actions.append(frozen)
        else:
            actions.append(by_m[int(s & ((1 << (n - 1)) - 1)).bit_count()])
    return actions
