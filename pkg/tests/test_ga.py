import numpy as np
import pytest
from scipy.optimize import minimize

from qarbiter.arbiter import winner_distribution, winner_probabilities
from qarbiter.errors import DataError, ParameterError, SizeError
from qarbiter.ga import (
    CHROMOSOME_BITS,
    GaConfig,
    decode,
    decode_angles,
    encode_angles,
    evolve,
    fitness,
    nearest_unitary,
    population_fitness,
    verify_strategy_set,
)
from qarbiter.published import PUBLISHED_SETS
from qarbiter.statevector import H, I2


def best_reachable_l1(target, rng):
    """Independent oracle: dense grid over |b_k|^2 then local polish, no GA involved."""
    v = np.linspace(0, 1, 21)
    grid = np.stack(np.meshgrid(v, v, v, v, indexing="ij"), -1).reshape(-1, 4)
    p = _brute_probs(grid)
    d = np.abs(p - target).sum(1)
    best = d.min()
    for start in grid[np.argsort(d)[:5]]:
        res = minimize(lambda x: np.abs(_brute_probs(np.clip(x, 0, 1)) - target).sum(), start, method="Powell")
        best = min(best, res.fun)
    return best


def _brute_probs(b_sq):
    groups = [
        ["0000", "0111", "1010", "1101"],
        ["0001", "0100", "1011", "1110"],
        ["0010", "0101", "1000", "1111"],
        ["0011", "0110", "1001", "1100"],
    ]
    b_sq = np.asarray(b_sq, dtype=float)
    out = np.zeros(b_sq.shape[:-1] + (4,))
    for w, patterns in enumerate(groups):
        for s in patterns:
            term = 1.0
            for k, c in enumerate(s):
                term = term * (b_sq[..., k] if c == "1" else 1 - b_sq[..., k])
            out[..., w] += term
    return out


class TestEncoding:
    def test_zero_bits_decode_to_identities(self):
        for u in decode(np.zeros(CHROMOSOME_BITS, dtype=np.uint8)):
            np.testing.assert_allclose(u, np.eye(2), atol=1e-15)

    def test_midpoint_theta(self):
        bits = np.zeros(CHROMOSOME_BITS, dtype=np.uint8)
        bits[0] = 1  # 2048 in the first player's theta field
        angles = decode_angles(bits)
        assert angles[0, 0] == pytest.approx(np.pi / 2)
        u = decode(bits)[0]
        np.testing.assert_allclose(np.abs(u), np.abs(H), atol=1e-15)

    def test_round_trip(self, rng):
        for _ in range(200):
            angles = rng.uniform([0, 0, 0], [np.pi, 2 * np.pi, 2 * np.pi], size=(4, 3))
            back = decode_angles(encode_angles(angles))
            step = np.array([np.pi, 2 * np.pi, 2 * np.pi]) / 4096
            diff = np.abs(back - angles)
            diff[:, 1:] = np.minimum(diff[:, 1:], 2 * np.pi - diff[:, 1:])
            assert np.all(diff <= step)

    def test_wrong_length(self):
        with pytest.raises(SizeError):
            decode(np.zeros(143, dtype=np.uint8))


class TestFitness:
    def test_exact_match(self):
        assert fitness([I2] * 4, (1, 0, 0, 0)) == 0

    def test_hadamard_against_descending(self):
        assert fitness([H] * 4, (0.4, 0.3, 0.2, 0.1)) == pytest.approx(0.4)

    def test_published_set(self):
        gates = [nearest_unitary(m) for m in PUBLISHED_SETS["descending-a"].matrices]
        assert fitness(gates, (0.4, 0.3, 0.2, 0.1)) <= 0.02

    def test_priority_range(self):
        with pytest.raises(ParameterError, match=r"eps\[0\] out of \[0,1\]"):
            fitness([H] * 4, (1.2, 0, 0, 0))

    def test_vectorized_matches_scalar(self, rng):
        target = np.array([0.1, 0.2, 0.3, 0.4])
        pop = rng.integers(0, 2, size=(64, CHROMOSOME_BITS), dtype=np.uint8)
        batch = population_fitness(pop, target)
        for bits, f in zip(pop, batch):
            assert f == pytest.approx(fitness(decode(bits), target), abs=1e-12)

    def test_closed_form_matches_brute_force(self, rng):
        for _ in range(50):
            x = rng.uniform(0, 1, 4)
            np.testing.assert_allclose(winner_probabilities(x), _brute_probs(x), atol=1e-14)


class TestConfig:
    @pytest.mark.parametrize(
        "kw", [{"population": 1}, {"elitism": 0}, {"elitism": 100}, {"mutation_rate": 1.5}, {"generations": 0}]
    )
    def test_invalid(self, kw):
        with pytest.raises(ParameterError):
            GaConfig(**kw)

    def test_defaults(self):
        c = GaConfig()
        assert (c.population, c.generations) == (100, 1000)


class TestEvolve:
    def test_deterministic(self):
        cfg = GaConfig(generations=60, seed=11)
        a, b = evolve((0.3, 0.3, 0.2, 0.2), cfg), evolve((0.3, 0.3, 0.2, 0.2), cfg)
        np.testing.assert_array_equal(a.best_bits, b.best_bits)
        assert a.fitness_trace == b.fitness_trace

    def test_trace_non_increasing(self):
        trace = evolve((0.25, 0.25, 0.4, 0.1), GaConfig(generations=300, seed=5)).fitness_trace
        assert len(trace) == 300
        assert all(b <= a for a, b in zip(trace, trace[1:]))

    def test_identity_optimum(self):
        assert evolve((1, 0, 0, 0)).fitness <= 1e-3

    def test_descending_target(self):
        r = evolve((0.4, 0.3, 0.2, 0.1))
        assert r.max_deviation <= 0.01

    def test_middle_heavy_target(self):
        r = evolve((0.15, 0.35, 0.35, 0.14))
        np.testing.assert_allclose(r.achieved.as_array(), [0.1548, 0.3496, 0.3497, 0.1459], atol=0.01)

    def test_best_is_reported_consistently(self):
        r = evolve((0.2, 0.2, 0.3, 0.3), GaConfig(generations=100, seed=3))
        assert r.fitness == pytest.approx(r.fitness_trace[-1], abs=1e-12)
        np.testing.assert_allclose(winner_distribution(r.best).as_array(), r.achieved.as_array())

    @pytest.mark.slow
    def test_reachable_targets(self, rng):
        # targets drawn from the achievable set: push random |b_k|^2 through the closed form
        for _ in range(20):
            target = winner_probabilities(rng.uniform(0, 1, 4))
            r = evolve(target, GaConfig(seed=int(rng.integers(2**32))))
            assert r.fitness <= 0.05

    @pytest.mark.slow
    def test_simplex_targets_reach_best_achievable(self, rng):
        for _ in range(20):
            target = rng.dirichlet(np.ones(4))
            optimum = best_reachable_l1(target, rng)
            r = evolve(target, GaConfig(seed=int(rng.integers(2**32))))
            assert r.fitness <= optimum + 0.05

    def test_some_simplex_targets_are_unreachable(self, rng):
        # the win-probability map does not cover the simplex, so a bare 0.05 bound cannot hold for all targets
        target = np.array([0.06, 0.303, 0.271, 0.366])
        assert best_reachable_l1(target, rng) > 0.05


class TestVerify:
    @pytest.mark.parametrize("name", sorted(PUBLISHED_SETS))
    def test_published_sets(self, name):
        entry = PUBLISHED_SETS[name]
        report = verify_strategy_set(entry.matrices, entry.reported, 2e-3)
        assert report.passed, report

    def test_identity(self):
        assert verify_strategy_set([I2] * 4, (1, 0, 0, 0), 1e-9).passed

    def test_reports_failure(self):
        report = verify_strategy_set([H] * 4, (1, 0, 0, 0), 1e-3)
        assert not report.passed
        assert report.deviations == pytest.approx((0.75, 0.25, 0.25, 0.25))

    def test_typo_guard(self):
        entry = PUBLISHED_SETS["descending-a"]
        broken = list(entry.matrices)
        broken[2] = broken[2] + np.array([[0.2, 0], [0, 0]])
        with pytest.raises(DataError):
            verify_strategy_set(broken, entry.reported, 2e-3)

    def test_tolerance_positive(self):
        with pytest.raises(ParameterError):
            verify_strategy_set([I2] * 4, (1, 0, 0, 0), 0)
