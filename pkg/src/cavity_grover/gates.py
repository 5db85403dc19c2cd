"""Diagonal gate model for the dissipative conditional phase flip (CPF).

An N-atom register couples one "control" atom (weak coupling Omega_1) and
N-1 spectator atoms (strong coupling Omega = eta * Omega_1) to a single
damped cavity mode (decay rate kappa = mu * Omega_1).  Run for one damped
Rabi pi-cycle of the control atom, the interaction acts as a diagonal gate
on the logical basis: the all-zeros state picks up the factor

    alpha = -exp(-pi * mu / sqrt(16 - mu^2)),

every state with the control in |0> and m spectators in |1> picks up

    beta_m = (-alpha)/(1 + m eta^2) * (cos(theta_m)
             + mu sin(theta_m)/sqrt(16 + 16 m eta^2 - mu^2))
             + m eta^2 / (1 + m eta^2),
    theta_m = pi * sqrt(1 + 16 m eta^2 / (16 - mu^2)),

and every state with the control in |1> is left untouched (no excitation
enters the cavity).  alpha and beta_m are real; |entry| < 1 signals norm
lost to leakage and photon decay, handled downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class DomainError(ValueError):
    """A parameter lies outside the physically supported regime."""


@dataclass(frozen=True)
class GateParams:
    """Physical gate parameters.

    n       qubit count (>= 2)
    omega1  control-atom coupling, rad/s (> 0)
    eta     spectator/control coupling ratio Omega/Omega_1 (> 0)
    mu      dimensionless cavity decay kappa/Omega_1, in [0, 4)
    """

    n: int
    omega1: float
    eta: float
    mu: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 qubits, got n={self.n}")
        if self.omega1 <= 0:
            raise ValueError(f"omega1 must be positive, got {self.omega1}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.mu < 0:
            raise ValueError(f"mu must be non-negative, got {self.mu}")
        if self.mu >= 4:
            raise DomainError(
                f"mu={self.mu} >= 4: overdamped, no pi rotation exists"
            )

    @property
    def kappa(self) -> float:
        """Cavity decay rate, rad/s."""
        return self.mu * self.omega1

    @property
    def omega_spectator(self) -> float:
        """Spectator-atom coupling, rad/s."""
        return self.eta * self.omega1


@dataclass(frozen=True)
class CpfCoefficients:
    """Gate-time diagonal coefficients: alpha, beta_1..beta_{n-1}, theta_m."""

    alpha: float
    beta: tuple[float, ...]
    theta: tuple[float, ...]


@dataclass(frozen=True)
class CpfDiagonal:
    """2^n real diagonal entries of a (possibly non-unitary) phase gate.

    Index convention: qubit 1 is the most significant bit.  Logical 0 on
    qubit 1 means the control atom is excited; logical 0 on qubits 2..n
    means the spectator sits in the uncoupled level.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (2**self.n,):
            raise ValueError(
                f"diagonal for n={self.n} needs {2**self.n} entries, "
                f"got shape {self.entries.shape}"
            )
        self.entries.setflags(write=False)


def gate_time(params: GateParams) -> float:
    """Duration of one damped Rabi pi-cycle, pi / sqrt(omega1^2 - kappa^2/16)."""
    return math.pi / (params.omega1 * math.sqrt(1.0 - params.mu**2 / 16.0))


@lru_cache(maxsize=None)
def cpf_coefficients(params: GateParams) -> CpfCoefficients:
    """Evaluate alpha and beta_1..beta_{n-1} at the gate time.

    Cached per parameter set: every search iteration reuses the same
    coefficients.
    """
    mu, eta = params.mu, params.eta
    alpha = -math.exp(-math.pi * mu / math.sqrt(16.0 - mu**2))
    beta = []
    theta = []
    for m in range(1, params.n):
        th = math.pi * math.sqrt(1.0 + 16.0 * m * eta**2 / (16.0 - mu**2))
        b = (-alpha) / (1.0 + m * eta**2) * (
            math.cos(th)
            + mu * math.sin(th) / math.sqrt(16.0 + 16.0 * m * eta**2 - mu**2)
        ) + m * eta**2 / (1.0 + m * eta**2)
        beta.append(b)
        theta.append(th)
    return CpfCoefficients(alpha=alpha, beta=tuple(beta), theta=tuple(theta))


def _spectator_excitations(n: int) -> np.ndarray:
    """Per-index count of qubits 2..n in logical 1 (qubit 1 is the MSB)."""
    idx = np.arange(2**n, dtype=np.uint32)
    return np.bitwise_count(idx & np.uint32((1 << (n - 1)) - 1))


def build_noisy_cpf(params: GateParams) -> CpfDiagonal:
    """Diagonal of the dissipative CPF gate at the gate time.

    entry(s) = alpha          if qubit 1 is 0 and no spectator is in 1,
               beta_m         if qubit 1 is 0 and m spectators are in 1,
               1              if qubit 1 is 1 (frozen sector).
    """
    coeff = cpf_coefficients(params)
    n = params.n
    m = _spectator_excitations(n)
    entries = np.ones(2**n)
    control_zero = np.arange(2**n) < 2 ** (n - 1)
    beta_by_m = np.concatenate(([coeff.alpha], coeff.beta))
    entries[control_zero] = beta_by_m[m[control_zero]]
    return CpfDiagonal(n=n, entries=entries)


def build_ideal_cpf(n: int) -> CpfDiagonal:
    """Perfect conditional phase flip: -1 on the all-zeros state, +1 elsewhere."""
    if n < 1:
        raise ValueError(f"need at least 1 qubit, got n={n}")
    entries = np.ones(2**n)
    entries[0] = -1.0
    return CpfDiagonal(n=n, entries=entries)


def mask_conjugate(diag: CpfDiagonal, marked: str) -> CpfDiagonal:
    """Conjugate a diagonal gate by bit flips so `marked` takes the alpha slot.

    Equivalent to sandwiching the gate between single-qubit flips on every
    qubit where `marked` has a 1: entry'(s) = entry(s XOR marked).
    """
    mask = bitstring_to_index(marked, diag.n)
    permuted = diag.entries[np.arange(2**diag.n) ^ mask]
    return CpfDiagonal(n=diag.n, entries=permuted)


def bitstring_to_index(bits: str, n: int) -> int:
    """Parse an n-character 0/1 string into a basis index (qubit 1 first)."""
    if len(bits) != n or any(c not in "01" for c in bits):
        raise ValueError(f"marked state must be {n} characters of 0/1, got {bits!r}")
    return int(bits, 2)
