"""Quantum-game access controller: duel games, a four-player W-state arbiter,
GA strategy search, and Grover-based function inversion on a dense simulator."""

from .arbiter import (
    TABLE2_DATA,
    GameRoundResult,
    PlayerData,
    WinnerDistribution,
    play_round,
    play_rounds,
    winner_distribution,
)
from .duel import GameModel, OutcomeDistribution, PayoffTable, StrategyAngles, strategy_gate
from .errors import ArbiterError
from .ga import GaConfig, evolve, verify_strategy_set
from .grover import OracleSpec, TruthTable, grover_search, invert_function, pipeline_round
from .statevector import StateVector, new_state

__version__ = "0.1.0"
