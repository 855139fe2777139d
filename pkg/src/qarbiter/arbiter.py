"""Four-player access-controller game.

Register layout on 12 qubits::

    0-3   strategy register (player k's qubit is k-1)
    4-7   identification bus, one-hot winner code
    8-11  data bus, receives the winner's data string

Round structure: strategy layer ``U_1 ⊗ ... ⊗ U_4`` on ``|0000>``, the
winner decoder ``|s>|0000> -> |s>|onehot(w(s))>``, then the data grid of
CNOTs from each id-bus line into the data bus following that player's bits.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PreconditionError, SizeError
from .statevector import (
    StateVector,
    apply_cnot,
    apply_controlled_x,
    apply_single,
    apply_unitary,
    check_unitary,
    make_rng,
    marginal,
    new_state,
    require_cleared,
)

N_PLAYERS = 4
DATA_WIDTH = 4
STRATEGY_QUBITS = (0, 1, 2, 3)
ID_QUBITS = (4, 5, 6, 7)
DATA_QUBITS = (8, 9, 10, 11)

DEFAULT_WINNER_MAP: dict[str, int] = {
    **dict.fromkeys(("0000", "0111", "1010", "1101"), 1),
    **dict.fromkeys(("0001", "0100", "1011", "1110"), 2),
    **dict.fromkeys(("0010", "0101", "1000", "1111"), 3),
    **dict.fromkeys(("0011", "0110", "1001", "1100"), 4),
}


def check_winner_map(winner_map: Mapping[str, int]) -> dict[str, int]:
    """Validate a pattern -> winner table: all 16 patterns, four per winner."""
    patterns = {format(i, "04b") for i in range(16)}
    if set(winner_map) != patterns:
        raise ParameterError("winner map must assign every 4-bit pattern exactly once")
    counts = [sum(1 for w in winner_map.values() if w == k) for k in range(1, N_PLAYERS + 1)]
    if counts != [4, 4, 4, 4]:
        raise ParameterError(f"each winner must own exactly 4 patterns, got counts {counts}")
    return dict(winner_map)


def winner_groups(winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP) -> dict[int, list[str]]:
    groups: dict[int, list[str]] = {k: [] for k in range(1, N_PLAYERS + 1)}
    for pattern in sorted(winner_map):
        groups[winner_map[pattern]].append(pattern)
    return groups


@dataclass(frozen=True)
class PlayerData:
    """Data strings of players 1..4, leftmost bit on data qubit 0."""

    bits: tuple[str, str, str, str]

    def __post_init__(self):
        if len(self.bits) != N_PLAYERS:
            raise SizeError(f"expected {N_PLAYERS} data strings, got {len(self.bits)}")
        for k, s in enumerate(self.bits, start=1):
            if len(s) != DATA_WIDTH or any(c not in "01" for c in s):
                raise SizeError(f"player {k} data must be a {DATA_WIDTH}-bit string, got {s!r}")

    def __getitem__(self, player: int) -> str:
        """Data of ``player`` (1-based)."""
        return self.bits[player - 1]


TABLE2_DATA = PlayerData(("1001", "0001", "1000", "1111"))


@dataclass(frozen=True)
class WinnerDistribution:
    p1: float
    p2: float
    p3: float
    p4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3, self.p4])


@dataclass(frozen=True)
class GameRoundResult:
    winner: int
    id_bus: str
    data_bus: str


def _w_state_unitary() -> np.ndarray:
    # Householder reflection swapping |0000> and the W state; both are real unit vectors
    w = np.zeros(16)
    w[[8, 4, 2, 1]] = 0.5
    v = np.zeros(16)
    v[0] = 1.0
    v -= w
    return np.eye(16) - 2.0 * np.outer(v, v) / (v @ v)


W_PREP = _w_state_unitary().astype(complex)


def prepare_w_state(state: StateVector, qubits: Sequence[int]) -> StateVector:
    """Load ``(|1000> + |0100> + |0010> + |0001>)/2`` into four cleared qubits."""
    if len(qubits) != 4:
        raise SizeError(f"the W state needs exactly 4 qubits, got {len(qubits)}")
    require_cleared(state, qubits, "W-state target")
    return apply_unitary(state, W_PREP, qubits)


def apply_winner_decoder(
    state: StateVector,
    strategy_qubits: Sequence[int] = STRATEGY_QUBITS,
    id_qubits: Sequence[int] = ID_QUBITS,
    winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP,
) -> StateVector:
    """Write the one-hot winner code of each strategy pattern onto the cleared id bus.

    Realized as one pattern-controlled NOT per strategy pattern.
    """
    if len(strategy_qubits) != 4 or len(id_qubits) != 4:
        raise SizeError("decoder needs 4 strategy qubits and 4 id qubits")
    require_cleared(state, id_qubits, "identification bus")
    winner_map = check_winner_map(winner_map)
    for pattern, winner in sorted(winner_map.items()):
        state = apply_controlled_x(state, strategy_qubits, id_qubits[winner - 1], pattern)
    return state


def apply_data_grid(
    state: StateVector,
    id_qubits: Sequence[int],
    data_qubits: Sequence[int],
    data: PlayerData,
) -> StateVector:
    """CNOT from id line k to data line j wherever player k's bit j is 1."""
    if len(id_qubits) != N_PLAYERS or len(data_qubits) != DATA_WIDTH:
        raise SizeError("data grid needs 4 id qubits and 4 data qubits")
    require_cleared(state, data_qubits, "data bus")
    for k, bits in enumerate(data.bits):
        for j, bit in enumerate(bits):
            if bit == "1":
                state = apply_cnot(state, id_qubits[k], data_qubits[j])
    return state


def _check_strategies(strategies: Sequence[np.ndarray]) -> list[np.ndarray]:
    if len(strategies) != N_PLAYERS:
        raise SizeError(f"expected {N_PLAYERS} strategies, got {len(strategies)}")
    gates = [check_unitary(u) for u in strategies]
    for u in gates:
        if u.shape != (2, 2):
            raise ParameterError(f"strategies must be 2x2 gates, got {u.shape}")
    return gates


def winner_probabilities(b_sq: np.ndarray, winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP) -> np.ndarray:
    """Win probabilities from ``|b_k|^2`` (last axis of length 4), vectorized over leading axes.

    Each pattern contributes ``prod_k (|b_k|^2 if bit k else |a_k|^2)`` to its winner.
    """
    b_sq = np.asarray(b_sq, dtype=float)
    a_sq = 1.0 - b_sq
    out = np.zeros(b_sq.shape[:-1] + (N_PLAYERS,))
    for pattern, winner in winner_map.items():
        term = np.ones(b_sq.shape[:-1])
        for k, bit in enumerate(pattern):
            term = term * (b_sq[..., k] if bit == "1" else a_sq[..., k])
        out[..., winner - 1] += term
    return out


def winner_distribution(
    strategies: Sequence[np.ndarray], winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP
) -> WinnerDistribution:
    """Closed-form win probabilities from each strategy's ``(a_k, b_k) = U_k|0>``."""
    gates = _check_strategies(strategies)
    a_sq = np.array([abs(u[0, 0]) ** 2 for u in gates])
    b_sq = np.array([abs(u[1, 0]) ** 2 for u in gates])
    # |a|^2 + |b|^2 = 1 up to the unitarity tolerance; renormalize per player
    b_sq = b_sq / (a_sq + b_sq)
    return WinnerDistribution(*(float(v) for v in winner_probabilities(b_sq, winner_map)))


def strategy_layer(strategies: Sequence[np.ndarray]) -> StateVector:
    """``U_1|0> ⊗ ... ⊗ U_4|0> ⊗ |0000> ⊗ |0000>``."""
    state = new_state(12)
    for q, u in zip(STRATEGY_QUBITS, _check_strategies(strategies)):
        state = apply_single(state, u, q)
    return state


def game_state(
    strategies: Sequence[np.ndarray],
    data: PlayerData = TABLE2_DATA,
    winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP,
) -> StateVector:
    """Full 12-qubit state just before measurement."""
    state = strategy_layer(strategies)
    state = apply_winner_decoder(state, STRATEGY_QUBITS, ID_QUBITS, winner_map)
    return apply_data_grid(state, ID_QUBITS, DATA_QUBITS, data)


def circuit_winner_distribution(
    strategies: Sequence[np.ndarray], winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP
) -> WinnerDistribution:
    """Win probabilities read off the id bus of the simulated circuit."""
    p = marginal(game_state(strategies, TABLE2_DATA, winner_map), ID_QUBITS)
    # one-hot code of player k sits at index 2**(3 - (k-1))
    return WinnerDistribution(*(float(p[1 << (N_PLAYERS - k)]) for k in range(1, N_PLAYERS + 1)))


def _decode_round(bus: int) -> GameRoundResult:
    # bus holds id (4 bits) followed by data (4 bits)
    id_bus = format(bus >> DATA_WIDTH, "04b")
    data_bus = format(bus & (2**DATA_WIDTH - 1), "04b")
    if id_bus.count("1") != 1:
        raise PreconditionError(f"measured identification bus {id_bus!r} is not one-hot")
    return GameRoundResult(winner=id_bus.index("1") + 1, id_bus=id_bus, data_bus=data_bus)


def play_rounds(
    strategies: Sequence[np.ndarray],
    data: PlayerData,
    rounds: int,
    seed,
    winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP,
) -> list[GameRoundResult]:
    """Measure ``rounds`` independent copies of the game from one seeded stream.

    The strategy register is measured too, but only the two buses are reported.
    """
    if rounds < 1:
        raise ParameterError(f"rounds must be positive, got {rounds}")
    state = game_state(strategies, data, winner_map)
    p = marginal(state, ID_QUBITS + DATA_QUBITS)
    rng = make_rng(seed)
    draws = rng.choice(p.shape[0], size=rounds, p=p / p.sum())
    return [_decode_round(int(d)) for d in draws]


def play_round(
    strategies: Sequence[np.ndarray],
    data: PlayerData,
    seed,
    winner_map: Mapping[str, int] = DEFAULT_WINNER_MAP,
) -> GameRoundResult:
    return play_rounds(strategies, data, 1, seed, winner_map)[0]
