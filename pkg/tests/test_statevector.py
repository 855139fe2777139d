import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import full_operator, random_unitary
from qarbiter.errors import GateError, ParameterError, QubitIndexError, SizeError
from qarbiter.statevector import (
    H,
    X,
    StateVector,
    apply_cnot,
    apply_controlled_x,
    apply_entangler_j,
    apply_permutation,
    apply_single,
    apply_unitary,
    check_unitary,
    entangler_matrix,
    new_state,
    probabilities,
    sample,
    sample_many,
)
from qarbiter.duel import StrategyAngles, strategy_gate


def bell():
    return StateVector(2, np.array([1, 0, 0, 1]) / np.sqrt(2))


class TestNewState:
    def test_one_qubit(self):
        np.testing.assert_array_equal(new_state(1).amplitudes, [1, 0])

    def test_two_qubits(self):
        np.testing.assert_array_equal(new_state(2).amplitudes, [1, 0, 0, 0])

    @pytest.mark.parametrize("n", [0, 17, -1])
    def test_size_bounds(self, n):
        with pytest.raises(SizeError):
            new_state(n)

    def test_state_is_read_only(self):
        with pytest.raises(ValueError):
            new_state(1).amplitudes[0] = 0


class TestSingleQubitGates:
    def test_hadamard_on_zero(self):
        out = apply_single(new_state(1), H, 0)
        np.testing.assert_allclose(out.amplitudes, np.array([1, 1]) / np.sqrt(2), atol=1e-15)

    def test_x_on_qubit_zero_is_leftmost(self):
        out = apply_single(new_state(2), X, 0)
        assert out.amplitude("10") == 1

    def test_half_turn_strategy_acts_like_hadamard_on_zero(self):
        gate = strategy_gate(StrategyAngles(np.pi / 2, 0, 0))
        out = apply_single(new_state(1), gate, 0)
        np.testing.assert_allclose(out.amplitudes, np.array([1, 1]) / np.sqrt(2), atol=1e-15)

    def test_non_unitary_rejected(self):
        with pytest.raises(GateError):
            apply_single(new_state(1), np.array([[1, 1], [0, 1]]), 0)

    def test_bad_index(self):
        with pytest.raises(SizeError):
            apply_single(new_state(2), H, 2)

    def test_matches_dense_kron_operator(self, rng):
        n = 5
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        state = StateVector(n, psi / np.linalg.norm(psi))
        for q in range(n):
            u = random_unitary(rng)
            expected = full_operator(u, q, n) @ state.amplitudes
            np.testing.assert_allclose(apply_single(state, u, q).amplitudes, expected, atol=1e-12)


class TestCnot:
    def test_flips_when_control_set(self):
        assert apply_cnot(StateVector.from_bits("10"), 0, 1).amplitude("11") == 1

    def test_idle_when_control_clear(self):
        assert apply_cnot(new_state(2), 0, 1).amplitude("00") == 1

    def test_superposition(self):
        psi = StateVector(2, np.array([1, 0, 1, 0]) / np.sqrt(2))
        np.testing.assert_allclose(apply_cnot(psi, 0, 1).amplitudes, bell().amplitudes, atol=1e-15)

    def test_same_qubit_rejected(self):
        with pytest.raises(QubitIndexError):
            apply_cnot(new_state(2), 1, 1)

    @pytest.mark.parametrize("control,target", [(0, 2), (2, 0), (1, 3), (3, 1)])
    def test_matches_basis_enumeration(self, control, target):
        n = 4
        for i in range(2**n):
            bits = format(i, "04b")
            out = apply_cnot(StateVector.from_bits(bits), control, target)
            flipped = list(bits)
            if bits[control] == "1":
                flipped[target] = "1" if bits[target] == "0" else "0"
            assert out.amplitude("".join(flipped)) == 1

    def test_pattern_controlled_x(self):
        out = apply_controlled_x(StateVector.from_bits("0100"), [0, 1, 2], 3, "010")
        assert out.amplitude("0101") == 1
        out = apply_controlled_x(StateVector.from_bits("1100"), [0, 1, 2], 3, "010")
        assert out.amplitude("1100") == 1


class TestEntangler:
    def test_maximal_entanglement(self):
        out = apply_entangler_j(new_state(2), 0, 1, np.pi / 2)
        np.testing.assert_allclose(out.amplitudes, np.array([1, 0, 0, 1j]) / np.sqrt(2), atol=1e-15)

    def test_third_turn(self):
        out = apply_entangler_j(new_state(2), 0, 1, np.pi / 3)
        expected = [np.cos(np.pi / 6), 0, 0, 1j * np.sin(np.pi / 6)]
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    @pytest.mark.parametrize("gamma", [0.0, np.pi, -0.1, 4.0])
    def test_gamma_range(self, gamma):
        with pytest.raises(ParameterError):
            entangler_matrix(gamma)

    def test_adjoint_round_trip(self, rng):
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        state = StateVector(3, psi / np.linalg.norm(psi))
        there = apply_entangler_j(state, 2, 0, 1.1, adjoint=True)
        back = apply_entangler_j(there, 2, 0, 1.1)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)


class TestProbabilities:
    def test_full_register(self):
        psi = apply_entangler_j(new_state(2), 0, 1, np.pi / 2)
        p = probabilities(psi, [0, 1])
        assert p["00"] == pytest.approx(0.5) and p["11"] == pytest.approx(0.5)
        assert p["01"] == p["10"] == 0

    def test_single_qubit_marginal(self):
        assert probabilities(StateVector.from_bits("10"), [0]) == {"0": 0.0, "1": 1.0}

    def test_w_state_marginal(self):
        # amplitudes 1/2 on the four weight-one strings; qubit 0 is 1 only in |1000>
        amps = np.zeros(16)
        amps[[8, 4, 2, 1]] = 0.5
        p = probabilities(StateVector(4, amps), [0])
        assert p["0"] == pytest.approx(0.75, abs=1e-15)
        assert p["1"] == pytest.approx(0.25, abs=1e-15)

    def test_ordering_follows_argument(self):
        p = probabilities(StateVector.from_bits("10"), [1, 0])
        assert p["01"] == 1

    def test_duplicate_indices(self):
        with pytest.raises(QubitIndexError):
            probabilities(new_state(2), [0, 0])


class TestSampling:
    def test_deterministic_state(self):
        for seed in (0, 1, 2**64 - 1):
            assert sample(StateVector.from_bits("10"), [0, 1], seed) == "10"

    def test_same_seed_same_result(self):
        assert sample_many(bell(), [0, 1], 50, 42) == sample_many(bell(), [0, 1], 50, 42)

    def test_bell_frequency_within_three_sigma(self):
        draws = sample_many(bell(), [0, 1], 10_000, 7)
        freq = draws.count("00") / 10_000
        assert abs(freq - 0.5) <= 0.015
        assert set(draws) <= {"00", "11"}

    def test_bad_seed(self):
        with pytest.raises(ParameterError):
            sample(bell(), [0], -1)

    def test_frequencies_match_probabilities(self, rng):
        n, shots = 3, 10_000
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        state = StateVector(n, psi / np.linalg.norm(psi))
        p = probabilities(state, [0, 2])
        draws = sample_many(state, [0, 2], shots, 99)
        for outcome, prob in p.items():
            freq = draws.count(outcome) / shots
            assert abs(freq - prob) <= 3 * np.sqrt(prob * (1 - prob) / shots) + 1e-12


def _random_circuit(rng, n, depth):
    """Gate list of (kind, payload) covering every module gate."""
    ops = []
    for _ in range(depth):
        kind = rng.integers(4)
        if kind == 0:
            ops.append(("single", random_unitary(rng), int(rng.integers(n))))
        elif n >= 2:
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            if kind == 1:
                ops.append(("cnot", a, b))
            elif kind == 2:
                ops.append(("j", a, b, float(rng.uniform(0.01, np.pi - 0.01))))
            else:
                ops.append(("two", random_unitary(rng, 4), a, b))
    return ops


def _run(state, ops, adjoint=False):
    seq = reversed(ops) if adjoint else ops
    for op in seq:
        if op[0] == "single":
            u = op[1].conj().T if adjoint else op[1]
            state = apply_single(state, u, op[2])
        elif op[0] == "cnot":
            state = apply_cnot(state, op[1], op[2])
        elif op[0] == "j":
            state = apply_entangler_j(state, op[1], op[2], op[3], adjoint=adjoint)
        else:
            u = op[1].conj().T if adjoint else op[1]
            state = apply_unitary(state, u, [op[2], op[3]])
    return state


class TestInvariants:
    def test_norm_over_random_circuits(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            state = _run(new_state(n), _random_circuit(rng, n, int(rng.integers(1, 51))))
            assert abs(state.norm() - 1) <= 1e-10

    def test_adjoint_round_trip(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
            start = StateVector(n, psi / np.linalg.norm(psi))
            ops = _random_circuit(rng, n, 20)
            back = _run(_run(start, ops), ops, adjoint=True)
            np.testing.assert_allclose(back.amplitudes, start.amplitudes, atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(1, 5),
        x=st.integers(0, 31),
        y=st.integers(0, 31),
        q=st.integers(0, 4),
        alpha=st.floats(0.05, 1.5),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_linearity(self, n, x, y, q, alpha, seed):
        x, y, q = x % 2**n, y % 2**n, q % n
        rng = np.random.default_rng(seed)
        u = random_unitary(rng)
        ex, ey = np.eye(2**n)[x], np.eye(2**n)[y]
        a, b = np.cos(alpha), np.sin(alpha) * 1j
        if x == y:
            a, b = 1.0, 0.0
        mixed = StateVector(n, a * ex + b * ey)
        lhs = apply_single(mixed, u, q).amplitudes
        rhs = a * apply_single(StateVector(n, ex), u, q).amplitudes + b * apply_single(StateVector(n, ey), u, q).amplitudes
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_permutation_validated(self):
        with pytest.raises(GateError):
            apply_permutation(new_state(2), [0, 1], [0, 0, 1, 2])

    def test_check_unitary_shape(self):
        with pytest.raises(GateError):
            check_unitary(np.eye(3))
