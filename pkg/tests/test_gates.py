"""Tests for the diagonal CPF gate model.

Frozen expected values were computed independently with mpmath at 25
significant digits from the closed-form expressions.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_grover.gates import (
    CpfDiagonal,
    DomainError,
    GateParams,
    bitstring_to_index,
    build_ideal_cpf,
    build_noisy_cpf,
    cpf_coefficients,
    gate_time,
    mask_conjugate,
)

OMEGA1 = 2 * math.pi * 4900.0

ALPHA_MU_010 = -0.924442550222648092
ALPHA_MU_005 = -0.961488209642273064
BETA1_ETA10_MU0 = 0.999878706847627553
COS_THETA1_ETA10_MU0 = 0.987749391610382815


def params(n=10, eta=10.0, mu=0.0):
    return GateParams(n=n, omega1=OMEGA1, eta=eta, mu=mu)


class TestGateParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            GateParams(n=1, omega1=1.0, eta=10.0, mu=0.0)
        with pytest.raises(ValueError):
            GateParams(n=4, omega1=-1.0, eta=10.0, mu=0.0)
        with pytest.raises(ValueError):
            GateParams(n=4, omega1=1.0, eta=0.0, mu=0.0)
        with pytest.raises(ValueError):
            GateParams(n=4, omega1=1.0, eta=10.0, mu=-0.1)

    def test_overdamped_rejected(self):
        with pytest.raises(DomainError):
            GateParams(n=4, omega1=1.0, eta=10.0, mu=4.0)
        with pytest.raises(DomainError):
            GateParams(n=4, omega1=1.0, eta=10.0, mu=7.3)

    def test_derived_rates(self):
        p = params(mu=0.1)
        assert p.kappa == pytest.approx(0.1 * OMEGA1, rel=1e-15)
        assert p.omega_spectator == pytest.approx(10 * OMEGA1, rel=1e-15)


class TestCpfCoefficients:
    def test_alpha_exact_minus_one_at_zero_decay(self):
        """exp(0) = 1, so alpha is exactly -1 without decay."""
        for eta in (1.0, 5.0, 10.0, 100.0):
            assert cpf_coefficients(params(eta=eta, mu=0.0)).alpha == -1.0

    def test_alpha_frozen_values(self):
        assert cpf_coefficients(params(mu=0.1)).alpha == pytest.approx(
            ALPHA_MU_010, abs=1e-15
        )
        assert cpf_coefficients(params(mu=0.05)).alpha == pytest.approx(
            ALPHA_MU_005, abs=1e-15
        )

    def test_beta1_frozen_value(self):
        coeff = cpf_coefficients(params(eta=10.0, mu=0.0))
        assert coeff.beta[0] == pytest.approx(BETA1_ETA10_MU0, abs=1e-14)
        assert math.cos(coeff.theta[0]) == pytest.approx(
            COS_THETA1_ETA10_MU0, abs=1e-12
        )

    @pytest.mark.parametrize("eta", [5.0, 10.0, 20.0])
    def test_beta_deviation_bound_without_decay(self, eta):
        """|beta_m - 1| <= 2/(1 + m eta^2) when kappa = 0."""
        coeff = cpf_coefficients(params(eta=eta, mu=0.0))
        for m, beta in enumerate(coeff.beta, start=1):
            assert abs(beta - 1.0) <= 2.0 / (1.0 + m * eta**2) + 1e-15

    def test_theta_at_gate_time(self):
        coeff = cpf_coefficients(params(eta=10.0, mu=0.1))
        for m, th in enumerate(coeff.theta, start=1):
            expected = math.pi * math.sqrt(1 + 16 * m * 100.0 / (16 - 0.01))
            assert th == pytest.approx(expected, rel=1e-15)

    def test_cached_per_params(self):
        p = params(mu=0.05)
        assert cpf_coefficients(p) is cpf_coefficients(
            GateParams(n=10, omega1=OMEGA1, eta=10.0, mu=0.05)
        )


class TestGateTime:
    def test_zero_decay(self):
        """Without decay the gate lasts exactly a bare pi cycle."""
        assert gate_time(params(mu=0.0)) == math.pi / OMEGA1

    def test_reference_duration(self):
        t0 = gate_time(params(mu=0.1))
        assert t0 == pytest.approx(1.02072719036807213e-4, rel=1e-14)
        assert abs(t0 - 102e-6) < 1e-6  # the quoted "about 102 us"

    def test_diverges_toward_overdamping(self):
        assert gate_time(params(mu=3.999999)) > 1000 * gate_time(params(mu=0.0))


class TestBuildNoisyCpf:
    def test_four_qubit_structure(self):
        """n=4 diagonal carries alpha, three beta_1, three beta_2, one beta_3,
        and eight untouched entries, grouped by spectator excitation count."""
        p = params(n=4, eta=10.0, mu=0.1)
        coeff = cpf_coefficients(p)
        entries = build_noisy_cpf(p).entries
        for s in range(16):
            if s >= 8:
                assert entries[s] == 1.0
            else:
                m = bin(s & 0b0111).count("1")
                expected = coeff.alpha if m == 0 else coeff.beta[m - 1]
                assert entries[s] == expected

    def test_two_qubit_ideal_limit(self):
        """Huge eta and no decay approaches diag(-1, 1, 1, 1)."""
        entries = build_noisy_cpf(params(n=2, eta=1e6, mu=0.0)).entries
        assert entries[0] == -1.0
        assert abs(entries[1] - 1.0) <= 2.0 / (1.0 + 1e12)
        assert entries[2] == 1.0 and entries[3] == 1.0

    def test_ten_qubit_reference_entries(self):
        entries = build_noisy_cpf(params(n=10, eta=10.0, mu=0.1)).entries
        assert entries[0] == pytest.approx(ALPHA_MU_010, abs=1e-15)
        assert np.all(entries[512:] == 1.0)

    def test_entries_bounded(self):
        for mu in (0.0, 0.05, 0.1, 1.0):
            entries = build_noisy_cpf(params(eta=7.0, mu=mu)).entries
            assert np.all(np.abs(entries) <= 1.0 + 1e-15)

    def test_converges_to_ideal(self):
        noisy = build_noisy_cpf(params(n=6, eta=1e8, mu=0.0)).entries
        ideal = build_ideal_cpf(6).entries
        assert np.max(np.abs(noisy - ideal)) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_spectator_permutation_symmetry(self, seed):
        """Relabeling qubits 2..n permutes indices but not entry values."""
        rng = np.random.default_rng(seed)
        n = 6
        entries = build_noisy_cpf(params(n=n, eta=4.0, mu=0.07)).entries
        perm = rng.permutation(n - 1)  # positions of qubits 2..n
        permuted_index = np.zeros(2**n, dtype=int)
        for s in range(2**n):
            spect = [(s >> (n - 2 - j)) & 1 for j in range(n - 1)]
            new_spect = [spect[perm[j]] for j in range(n - 1)]
            t = (s >> (n - 1)) << (n - 1)
            for j, bit in enumerate(new_spect):
                t |= bit << (n - 2 - j)
            permuted_index[s] = t
        assert np.array_equal(entries, entries[permuted_index])


class TestBuildIdealCpf:
    def test_single_qubit(self):
        assert np.array_equal(build_ideal_cpf(1).entries, [-1.0, 1.0])

    def test_four_qubits(self):
        entries = build_ideal_cpf(4).entries
        assert entries[0] == -1.0
        assert np.all(entries[1:] == 1.0)
        assert entries.shape == (16,)

    def test_rejects_empty_register(self):
        with pytest.raises(ValueError):
            build_ideal_cpf(0)


class TestMaskConjugate:
    def test_zero_mask_is_identity(self):
        diag = build_noisy_cpf(params(n=5, eta=3.0, mu=0.04))
        same = mask_conjugate(diag, "00000")
        assert np.array_equal(same.entries, diag.entries)

    def test_all_ones_on_ideal(self):
        flipped = mask_conjugate(build_ideal_cpf(4), "1111")
        assert flipped.entries[15] == -1.0
        assert np.sum(flipped.entries == -1.0) == 1

    @settings(max_examples=40, deadline=None)
    @given(mask=st.integers(min_value=0, max_value=2**6 - 1))
    def test_marked_state_takes_alpha(self, mask):
        p = params(n=6, eta=8.0, mu=0.09)
        marked = format(mask, "06b")
        conj = mask_conjugate(build_noisy_cpf(p), marked)
        assert conj.entries[mask] == cpf_coefficients(p).alpha

    @settings(max_examples=40, deadline=None)
    @given(
        mask=st.integers(min_value=0, max_value=2**6 - 1),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_involution(self, mask, seed):
        """Conjugating twice with the same mask restores the diagonal bit-exactly."""
        rng = np.random.default_rng(seed)
        diag = CpfDiagonal(n=6, entries=rng.uniform(-1, 1, size=64))
        marked = format(mask, "06b")
        twice = mask_conjugate(mask_conjugate(diag, marked), marked)
        assert np.array_equal(twice.entries, diag.entries)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            mask_conjugate(build_ideal_cpf(4), "01")


class TestBitstring:
    def test_round_trip(self):
        assert bitstring_to_index("0011000000", 10) == 0b0011000000

    def test_rejects_bad_characters(self):
        with pytest.raises(ValueError):
            bitstring_to_index("00110000a0", 10)
