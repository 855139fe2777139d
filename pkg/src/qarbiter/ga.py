"""Genetic search for strategy sets whose win probabilities match target priorities.

A chromosome holds 144 bits: for each of the four players, three 12-bit
unsigned fields (MSB first) for θ, φ and ψ. A field value ``v`` decodes to
``span * v / 4096`` with span π for θ and 2π for the phases, so every
bitstring is a valid genotype.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .arbiter import N_PLAYERS, WinnerDistribution, winner_distribution, winner_probabilities
from .duel import StrategyAngles, strategy_gate
from .errors import DataError, ParameterError, SizeError
from .statevector import make_rng

FIELD_BITS = 12
ANGLES_PER_PLAYER = 3
CHROMOSOME_BITS = N_PLAYERS * ANGLES_PER_PLAYER * FIELD_BITS
LEVELS = 2**FIELD_BITS
SPANS = np.array([np.pi, 2 * np.pi, 2 * np.pi])
_WEIGHTS = 2 ** np.arange(FIELD_BITS - 1, -1, -1)

StrategySet = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def check_priorities(eps: Sequence[float]) -> tuple[float, ...]:
    """Targets must be four values in [0, 1]; they are not renormalized."""
    eps = tuple(float(e) for e in eps)
    if len(eps) != N_PLAYERS:
        raise ParameterError(f"expected {N_PLAYERS} priorities, got {len(eps)}")
    for k, e in enumerate(eps):
        if not 0.0 <= e <= 1.0:
            raise ParameterError(f"eps[{k}] out of [0,1]")
    return eps


def decode_angles(bits: np.ndarray) -> np.ndarray:
    """Angles of shape ``(..., 4, 3)`` from chromosomes of shape ``(..., 144)``."""
    bits = np.asarray(bits)
    if bits.shape[-1] != CHROMOSOME_BITS:
        raise SizeError(f"chromosome must have {CHROMOSOME_BITS} bits, got {bits.shape[-1]}")
    fields = bits.reshape(bits.shape[:-1] + (N_PLAYERS, ANGLES_PER_PLAYER, FIELD_BITS))
    values = fields.astype(np.int64) @ _WEIGHTS
    return values * SPANS / LEVELS


def encode_angles(angles: np.ndarray) -> np.ndarray:
    """Inverse of :func:`decode_angles` up to one quantization step."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (N_PLAYERS, ANGLES_PER_PLAYER):
        raise SizeError(f"expected angles of shape (4, 3), got {angles.shape}")
    values = np.rint(angles / SPANS * LEVELS).astype(np.int64)
    values[:, 0] = np.clip(values[:, 0], 0, LEVELS - 1)
    values[:, 1:] %= LEVELS
    bits = (values[..., None] >> np.arange(FIELD_BITS - 1, -1, -1)) & 1
    return bits.reshape(CHROMOSOME_BITS).astype(np.uint8)


def decode(bits: np.ndarray) -> StrategySet:
    """Four strategy gates from one chromosome."""
    angles = decode_angles(bits)
    if angles.ndim != 2:
        raise SizeError("decode takes a single chromosome")
    return tuple(strategy_gate(StrategyAngles(*row)) for row in angles)


def fitness(candidate: Sequence[np.ndarray], target: Sequence[float]) -> float:
    """L1 distance between the candidate's win probabilities and ``target``."""
    eps = np.array(check_priorities(target))
    return float(np.abs(winner_distribution(candidate).as_array() - eps).sum())


def population_fitness(population: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Vectorized :func:`fitness` over chromosomes; only ``|b_k|^2 = sin^2(θ_k/2)`` matters."""
    theta = decode_angles(population)[..., 0]
    p = winner_probabilities(np.sin(theta / 2) ** 2)
    return np.abs(p - target).sum(axis=-1)


@dataclass(frozen=True)
class GaConfig:
    population: int = 100
    generations: int = 1000
    mutation_rate: float = 4.0 / CHROMOSOME_BITS
    crossover_rate: float = 0.9
    elitism: int = 1
    tournament_size: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ParameterError(f"population must be at least 2, got {self.population}")
        if self.generations < 1:
            raise ParameterError(f"generations must be at least 1, got {self.generations}")
        if not 1 <= self.elitism < self.population:
            raise ParameterError(f"elitism must lie in [1, population), got {self.elitism}")
        if self.tournament_size < 1:
            raise ParameterError(f"tournament_size must be positive, got {self.tournament_size}")
        for name in ("mutation_rate", "crossover_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass
class EvolutionResult:
    best: StrategySet
    best_bits: np.ndarray
    achieved: WinnerDistribution
    fitness: float
    max_deviation: float
    fitness_trace: list[float] = field(repr=False)


def evolve(target: Sequence[float], config: GaConfig = GaConfig()) -> EvolutionResult:
    """Run the GA and return the best strategy set found.

    Tournament selection, single-point crossover on pairs, per-bit mutation,
    and the ``elitism`` best individuals copied unchanged, so the best
    fitness per generation never increases. One seeded stream drives all
    randomness.
    """
    eps = np.array(check_priorities(target))
    rng = make_rng(config.seed)
    size = config.population
    n_children = size - config.elitism
    n_parents = n_children + n_children % 2

    pop = rng.integers(0, 2, size=(size, CHROMOSOME_BITS), dtype=np.uint8)
    fit = population_fitness(pop, eps)
    trace = []
    for _ in range(config.generations):
        order = np.argsort(fit, kind="stable")
        elites = pop[order[: config.elitism]]

        entrants = rng.integers(0, size, size=(n_parents, config.tournament_size))
        winners = entrants[np.arange(n_parents), np.argmin(fit[entrants], axis=1)]
        mothers, fathers = pop[winners[0::2]], pop[winners[1::2]]

        crossing = rng.random(len(mothers)) < config.crossover_rate
        points = rng.integers(1, CHROMOSOME_BITS, size=len(mothers))
        swap = (np.arange(CHROMOSOME_BITS) >= points[:, None]) & crossing[:, None]
        children = np.concatenate(
            [np.where(swap, fathers, mothers), np.where(swap, mothers, fathers)]
        )[:n_children]
        children ^= (rng.random(children.shape) < config.mutation_rate).astype(np.uint8)

        pop = np.concatenate([elites, children])
        fit = population_fitness(pop, eps)
        trace.append(float(fit.min()))

    best_bits = pop[int(np.argmin(fit))].copy()
    best = decode(best_bits)
    achieved = winner_distribution(best)
    dev = np.abs(achieved.as_array() - eps)
    return EvolutionResult(
        best=best,
        best_bits=best_bits,
        achieved=achieved,
        fitness=float(dev.sum()),
        max_deviation=float(dev.max()),
        fitness_trace=trace,
    )


def nearest_unitary(matrix: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition (closest unitary in Frobenius norm)."""
    u, _, vh = np.linalg.svd(np.asarray(matrix, dtype=complex))
    return u @ vh


@dataclass
class VerificationReport:
    passed: bool
    tolerance: float
    expected: tuple[float, ...]
    achieved: tuple[float, ...]
    deviations: tuple[float, ...]
    max_deviation: float

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "expected": list(self.expected),
            "achieved": list(self.achieved),
            "deviations": list(self.deviations),
            "max_deviation": self.max_deviation,
        }


def verify_strategy_set(
    matrices: Sequence[np.ndarray], expected: Sequence[float], tol: float, max_projection: float = 0.01
) -> VerificationReport:
    """Project each matrix to the nearest unitary and compare win probabilities componentwise.

    A matrix further than ``max_projection`` (largest entry change) from its
    projection is rejected as a typo rather than silently repaired.
    """
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol!r}")
    if len(matrices) != N_PLAYERS:
        raise SizeError(f"expected {N_PLAYERS} matrices, got {len(matrices)}")
    expected = tuple(float(v) for v in expected)
    if len(expected) != N_PLAYERS:
        raise SizeError(f"expected {N_PLAYERS} reference probabilities, got {len(expected)}")
    gates = []
    for k, m in enumerate(matrices, start=1):
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2) or not np.all(np.isfinite(m)):
            raise DataError(f"player {k}: expected a finite 2x2 matrix")
        u = nearest_unitary(m)
        gap = float(np.abs(u - m).max())
        if gap > max_projection:
            raise DataError(f"player {k}: matrix is {gap:.4f} away from the nearest unitary")
        gates.append(u)
    achieved = winner_distribution(gates).as_array()
    dev = np.abs(achieved - np.array(expected))
    return VerificationReport(
        passed=bool(np.all(dev <= tol)),
        tolerance=tol,
        expected=expected,
        achieved=tuple(float(v) for v in achieved),
        deviations=tuple(float(v) for v in dev),
        max_deviation=float(dev.max()),
    )
