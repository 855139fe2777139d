"""Two-player quantum games: the Meyer-Eisert circuit and its simplified variant.

``original``:    |00> -> J -> U_A ⊗ U_B -> J† -> measure
``simplified``:  |00> -> U_A ⊗ U_B -> J -> measure

The simplified circuit drops the disentangler and lets J act after the
strategies, the same ordering the four-player arbiter uses. With γ = π/2 and
θ = π/2 strategies it reproduces :func:`closed_form_distribution` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .errors import ParameterError
from .statevector import (
    apply_entangler_j,
    apply_unitary,
    check_unitary,
    marginal,
    new_state,
)

TWO_PI = 2 * np.pi
OUTCOMES = ("CC", "CD", "DC", "DD")


@dataclass(frozen=True)
class StrategyAngles:
    """θ in [0, π]; φ, ψ in [0, 2π)."""

    theta: float = 0.0
    phi: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ParameterError(f"theta must lie in [0, pi], got {self.theta!r}")
        for name in ("phi", "psi"):
            v = getattr(self, name)
            if not 0.0 <= v < TWO_PI:
                raise ParameterError(f"{name} must lie in [0, 2pi), got {v!r}")


def _gate(theta, phi, psi) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [np.exp(1j * phi) * c, -np.exp(1j * psi) * s],
            [np.exp(-1j * psi) * s, np.exp(-1j * phi) * c],
        ],
        dtype=complex,
    )


def strategy_gate(angles: StrategyAngles) -> np.ndarray:
    """Unitary strategy ``[[e^{iφ}c, -e^{iψ}s], [e^{-iψ}s, e^{-iφ}c]]`` with c, s = cos, sin(θ/2).

    At θ = π/2 this is the two-phase family used by the closed-form duel.
    """
    return _gate(angles.theta, angles.phi, angles.psi)


def half_turn_gate(phi: float, psi: float) -> np.ndarray:
    """The θ = π/2 strategy; angles are taken modulo 2π."""
    return _gate(np.pi / 2, np.mod(phi, TWO_PI), np.mod(psi, TWO_PI))


@dataclass(frozen=True)
class StrategyAmplitudes:
    a: complex
    b: complex


def strategy_amplitudes(gate: np.ndarray) -> StrategyAmplitudes:
    """``a = <0|U|0>``, ``b = <1|U|0>`` (the first column of U)."""
    m = check_unitary(gate)
    if m.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 gate, got {m.shape}")
    return StrategyAmplitudes(complex(m[0, 0]), complex(m[1, 0]))


@dataclass(frozen=True)
class OutcomeDistribution:
    p_cc: float
    p_cd: float
    p_dc: float
    p_dd: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_cc, self.p_cd, self.p_dc, self.p_dd])


@dataclass(frozen=True)
class PayoffTable:
    """Payoff pair ``(A, B)`` for each outcome."""

    cc: tuple[float, float]
    cd: tuple[float, float]
    dc: tuple[float, float]
    dd: tuple[float, float]

    def __post_init__(self):
        for key in ("cc", "cd", "dc", "dd"):
            pair = getattr(self, key)
            if len(pair) != 2 or not all(np.isfinite(v) for v in pair):
                raise ParameterError(f"payoff {key.upper()} must be two finite numbers, got {pair!r}")

    def matrix(self) -> np.ndarray:
        """4x2 array, rows in CC, CD, DC, DD order."""
        return np.array([self.cc, self.cd, self.dc, self.dd], dtype=float)


PAYOFF_PRESETS = {
    "prisoners-dilemma": PayoffTable(cc=(3, 3), cd=(0, 5), dc=(5, 0), dd=(1, 1)),
}


def payoff_table(name: str) -> PayoffTable:
    try:
        return PAYOFF_PRESETS[name]
    except KeyError:
        raise ParameterError(f"unknown payoff table {name!r}; presets: {sorted(PAYOFF_PRESETS)}") from None


@dataclass(frozen=True)
class GameModel:
    variant: Literal["original", "simplified"] = "simplified"
    gamma: float = np.pi / 2

    def __post_init__(self):
        if self.variant not in ("original", "simplified"):
            raise ParameterError(f"variant must be 'original' or 'simplified', got {self.variant!r}")
        if not 0.0 < self.gamma < np.pi:
            raise ParameterError(f"gamma must lie in (0, pi), got {self.gamma!r}")


def final_state(model: GameModel, ua: np.ndarray, ub: np.ndarray):
    """Statevector just before measurement; player A is qubit 0."""
    strategies = np.kron(check_unitary(ua), check_unitary(ub))
    state = new_state(2)
    if model.variant == "original":
        state = apply_entangler_j(state, 0, 1, model.gamma)
        state = apply_unitary(state, strategies, [0, 1])
        state = apply_entangler_j(state, 0, 1, model.gamma, adjoint=True)
    else:
        state = apply_unitary(state, strategies, [0, 1])
        state = apply_entangler_j(state, 0, 1, model.gamma)
    return state


def play_game(model: GameModel, ua: np.ndarray, ub: np.ndarray) -> OutcomeDistribution:
    """Simulate the chosen circuit; outcomes 00, 01, 10, 11 map to CC, CD, DC, DD."""
    p = marginal(final_state(model, ua, ub), [0, 1])
    return OutcomeDistribution(*(float(v) for v in p))


def closed_form_distribution(phi_a: float, psi_a: float, phi_b: float, psi_b: float) -> OutcomeDistribution:
    """Outcome probabilities of the simplified game at γ = π/2 with θ = π/2 strategies."""
    s_plus = np.sin((phi_b + phi_a) + (psi_b + psi_a))
    s_minus = np.sin((phi_b - phi_a) + (psi_b - psi_a))
    return OutcomeDistribution(
        p_cc=0.25 * (1 + s_plus),
        p_cd=0.25 * (1 - s_minus),
        p_dc=0.25 * (1 + s_minus),
        p_dd=0.25 * (1 - s_plus),
    )


def expected_payoffs(dist: OutcomeDistribution, table: PayoffTable) -> tuple[float, float]:
    pa, pb = dist.as_array() @ table.matrix()
    return float(pa), float(pb)


AXES = {
    f"{angle}_{player}": (player, angle)
    for player in ("A", "B")
    for angle in ("theta", "phi", "psi")
}


def axis_values(axis: str, resolution: int) -> np.ndarray:
    """Grid over the axis's full range: θ includes both endpoints, phases stop short of 2π."""
    _, angle = _axis(axis)
    if angle == "theta":
        return np.linspace(0.0, np.pi, resolution)
    return np.linspace(0.0, TWO_PI, resolution, endpoint=False)


def _axis(name: str) -> tuple[str, str]:
    try:
        return AXES[name]
    except KeyError:
        raise ParameterError(f"unknown axis {name!r}; expected one of {sorted(AXES)}") from None


@dataclass
class PayoffSurface:
    axis1: str
    axis2: str
    values1: np.ndarray
    values2: np.ndarray
    payoff_a: np.ndarray  # shape (len(values1), len(values2))
    payoff_b: np.ndarray

    def rows(self) -> Iterator[tuple[str, float, str, float, float, float]]:
        for i, v1 in enumerate(self.values1):
            for j, v2 in enumerate(self.values2):
                yield (self.axis1, float(v1), self.axis2, float(v2),
                       float(self.payoff_a[i, j]), float(self.payoff_b[i, j]))


def payoff_surface(
    model: GameModel,
    axis1: str,
    axis2: str,
    table: PayoffTable,
    resolution: int = 64,
    fixed: tuple[StrategyAngles, StrategyAngles] | None = None,
) -> PayoffSurface:
    """Expected payoffs of both players over a 2-D sweep of two strategy angles.

    Angles that are not swept come from ``fixed`` (all zero by default).
    """
    if axis1 == axis2:
        raise ParameterError(f"sweep axes must differ, got {axis1!r} twice")
    p1, a1 = _axis(axis1)
    p2, a2 = _axis(axis2)
    if resolution < 2:
        raise ParameterError(f"resolution must be at least 2, got {resolution}")
    if fixed is None:
        fixed = (StrategyAngles(), StrategyAngles())
    base = {"A": vars(fixed[0]).copy(), "B": vars(fixed[1]).copy()}
    values1, values2 = axis_values(axis1, resolution), axis_values(axis2, resolution)
    pay_a = np.empty((resolution, resolution))
    pay_b = np.empty((resolution, resolution))
    for i, v1 in enumerate(values1):
        for j, v2 in enumerate(values2):
            angles = {"A": dict(base["A"]), "B": dict(base["B"])}
            angles[p1][a1] = v1
            angles[p2][a2] = v2
            ua = strategy_gate(StrategyAngles(**angles["A"]))
            ub = strategy_gate(StrategyAngles(**angles["B"]))
            pay_a[i, j], pay_b[i, j] = expected_payoffs(play_game(model, ua, ub), table)
    return PayoffSurface(axis1, axis2, values1, values2, pay_a, pay_b)
