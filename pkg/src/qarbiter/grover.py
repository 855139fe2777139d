"""Function inversion by Grover search behind a configurable comparator oracle.

The oracle marks ``x`` when ``f(x) = y``. It is built from reversible basis
maps: ``U_f`` writes ``f(x)`` into a work register, the bit-string comparator
(QBSC) compares the work register against the ``|y>`` register into two
output bits, the phase flips when those bits read ``00`` (equal), and
everything except the phase is uncomputed.
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .arbiter import DATA_WIDTH, PlayerData, play_rounds
from .errors import NoSolutionError, ParameterError, SearchFailureError, SizeError
from .statevector import (
    H,
    StateVector,
    X,
    apply_permutation,
    apply_single,
    apply_unitary,
    make_rng,
    new_state,
    sample,
)

MAX_SEARCH_QUBITS = 12


def _check_bits(s: str, width: int, what: str) -> str:
    if len(s) != width or any(c not in "01" for c in s):
        raise SizeError(f"{what} must be a {width}-bit string, got {s!r}")
    return s


@dataclass(frozen=True)
class TruthTable:
    """``table[x]`` is ``f(x)`` for the integer value of the input bitstring ``x``."""

    n_in: int
    n_out: int
    table: tuple[str, ...]

    def __post_init__(self):
        if self.n_in < 1 or self.n_out < 1:
            raise SizeError("n_in and n_out must be positive")
        if len(self.table) != 2**self.n_in:
            raise SizeError(f"truth table needs {2 ** self.n_in} entries, got {len(self.table)}")
        for x, out in enumerate(self.table):
            _check_bits(out, self.n_out, f"f({x:0{self.n_in}b})")

    @classmethod
    def from_function(cls, n_in: int, n_out: int, fn: Callable[[int], int]) -> TruthTable:
        return cls(n_in, n_out, tuple(format(fn(x), f"0{n_out}b") for x in range(2**n_in)))

    @classmethod
    def from_json(cls, doc: dict) -> TruthTable:
        extra = set(doc) - {"n_in", "n_out", "table"}
        if extra:
            raise ParameterError(f"unknown truth-table field(s): {sorted(extra)}")
        try:
            return cls(int(doc["n_in"]), int(doc["n_out"]), tuple(doc["table"]))
        except KeyError as exc:
            raise ParameterError(f"truth table is missing {exc.args[0]!r}") from None

    @classmethod
    def load(cls, path: str | Path) -> TruthTable:
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"n_in": self.n_in, "n_out": self.n_out, "table": list(self.table)}

    def __call__(self, x: str) -> str:
        return self.table[int(_check_bits(x, self.n_in, "x"), 2)]

    def values(self) -> np.ndarray:
        return np.array([int(s, 2) for s in self.table], dtype=np.int64)


class ComparatorResult(NamedTuple):
    o1: int
    o2: int


def qbsc_compare(a: str, b: str) -> ComparatorResult:
    """``(1, 0)`` if a > b, ``(0, 1)`` if a < b, ``(0, 0)`` if equal; leftmost bit most significant."""
    if len(a) != len(b):
        raise SizeError(f"cannot compare strings of lengths {len(a)} and {len(b)}")
    _check_bits(a, len(a), "a")
    _check_bits(b, len(b), "b")
    va, vb = int(a, 2), int(b, 2)
    return ComparatorResult(int(va > vb), int(va < vb))


def qbsc_basis_map(n: int) -> np.ndarray:
    """Comparator as a permutation of the ``2n + 2`` qubit basis ``|a>|b>|o1 o2>``.

    The comparison result is XORed into the output pair, which makes the map
    its own inverse and reversible for any ancilla contents.
    """
    idx = np.arange(2 ** (2 * n + 2))
    a = idx >> (n + 2)
    b = (idx >> 2) & (2**n - 1)
    o1 = ((idx >> 1) & 1) ^ (a > b)
    o2 = (idx & 1) ^ (a < b)
    return (idx & ~3) | (o1 << 1) | o2


def qbsc_unitary_check(n: int) -> bool:
    """Exhaustively confirm the comparator is a basis permutation matching :func:`qbsc_compare`."""
    if not 1 <= n <= 6:
        raise SizeError(f"comparator check supports 1 <= n <= 6, got {n}")
    perm = qbsc_basis_map(n)
    if not np.array_equal(np.sort(perm), np.arange(perm.shape[0])):
        return False
    cleared = np.arange(2 ** (2 * n)) << 2
    outputs = perm[cleared]
    if np.unique(outputs).shape[0] != cleared.shape[0]:
        return False
    for i, out in zip(range(2 ** (2 * n)), outputs):
        a, b = format(i >> n, f"0{n}b"), format(i & (2**n - 1), f"0{n}b")
        if (out >> 2) != i or ComparatorResult(int(out >> 1) & 1, int(out) & 1) != qbsc_compare(a, b):
            return False
    return True


def function_basis_map(f: TruthTable) -> np.ndarray:
    """``|x>|w> -> |x>|w XOR f(x)>`` as a permutation over ``n_in + n_out`` qubits."""
    idx = np.arange(2 ** (f.n_in + f.n_out))
    x = idx >> f.n_out
    return idx ^ f.values()[x]


@dataclass(frozen=True)
class OracleSpec:
    f: TruthTable
    y: str

    def __post_init__(self):
        _check_bits(self.y, self.f.n_out, "target y")


@dataclass(frozen=True)
class PhaseOracle:
    """Diagonal ``±1`` action of the oracle on the ``n_in`` search qubits."""

    n_in: int
    signs: np.ndarray
    marked: tuple[str, ...]

    def matrix(self) -> np.ndarray:
        return np.diag(self.signs.astype(complex))

    def apply(self, state: StateVector) -> StateVector:
        if state.n_qubits != self.n_in:
            raise SizeError(f"oracle acts on {self.n_in} qubits, state has {state.n_qubits}")
        return StateVector(self.n_in, state.amplitudes * self.signs)


def build_oracle(spec: OracleSpec) -> PhaseOracle:
    """Trace every search basis state through compute, compare, flip and uncompute.

    All stages are basis permutations plus one diagonal phase, so following
    each ``|x>|0...0>`` through the register values is exact.
    """
    f = spec.f
    x = np.arange(2**f.n_in)
    fx = f.values()
    y = int(spec.y, 2)

    work = np.zeros_like(x) ^ fx[x]
    o1 = np.zeros_like(x) ^ (work > y)
    o2 = np.zeros_like(x) ^ (work < y)
    signs = np.where((o1 == 0) & (o2 == 0), -1, 1)
    o1 ^= work > y
    o2 ^= work < y
    work ^= fx[x]
    if np.any(work) or np.any(o1) or np.any(o2):
        raise AssertionError("oracle ancillas were not restored")

    marked = tuple(format(int(i), f"0{f.n_in}b") for i in np.flatnonzero(signs < 0))
    return PhaseOracle(f.n_in, signs.astype(float), marked)


@dataclass(frozen=True)
class OracleLayout:
    """Qubit positions of the full ancilla-level oracle circuit."""

    x: tuple[int, ...]
    work: tuple[int, ...]
    y: tuple[int, ...]
    out: tuple[int, int]

    @classmethod
    def packed(cls, n_in: int, n_out: int) -> OracleLayout:
        x = tuple(range(n_in))
        work = tuple(range(n_in, n_in + n_out))
        y = tuple(range(n_in + n_out, n_in + 2 * n_out))
        out = (n_in + 2 * n_out, n_in + 2 * n_out + 1)
        return cls(x, work, y, out)

    @property
    def n_qubits(self) -> int:
        return len(self.x) + len(self.work) + len(self.y) + 2


EQUAL_FLIP = np.diag([-1, 1, 1, 1]).astype(complex)


def apply_oracle_circuit(state: StateVector, spec: OracleSpec, layout: OracleLayout) -> StateVector:
    """Run the oracle with explicit ancillas on a statevector (all ancillas start cleared)."""
    f = spec.f
    fmap = function_basis_map(f)
    cmap = qbsc_basis_map(f.n_out)
    load_y = [q for q, bit in zip(layout.y, spec.y) if bit == "1"]

    state = apply_permutation(state, layout.x + layout.work, fmap)
    for q in load_y:
        state = apply_single(state, X, q)
    state = apply_permutation(state, layout.work + layout.y + layout.out, cmap)
    state = apply_unitary(state, EQUAL_FLIP, layout.out)
    # both maps are involutions, so uncomputing reapplies them
    state = apply_permutation(state, layout.work + layout.y + layout.out, cmap)
    for q in load_y:
        state = apply_single(state, X, q)
    return apply_permutation(state, layout.x + layout.work, fmap)


def auto_iterations(n_in: int, n_marked: int) -> int:
    if n_marked == 0:
        raise NoSolutionError("no input satisfies f(x) = y")
    return math.floor(math.pi / 4 * math.sqrt(2**n_in / n_marked))


@dataclass(frozen=True)
class GroverResult:
    x: str
    success_probability: float
    iterations: int
    marked: tuple[str, ...]


def diffuse(state: StateVector) -> StateVector:
    """Inversion about the mean: ``H^n (2|0><0| - I) H^n``."""
    n = state.n_qubits
    for q in range(n):
        state = apply_single(state, H, q)
    amps = -state.amplitudes
    amps[0] = -amps[0]
    state = StateVector(n, amps)
    for q in range(n):
        state = apply_single(state, H, q)
    return state


def grover_search(
    spec: OracleSpec | PhaseOracle, iterations: int | str = "auto", seed=0
) -> GroverResult:
    """Amplify the marked inputs and measure once.

    ``success_probability`` is the exact probability mass on marked inputs
    in the final statevector; ``x`` is one seeded measurement.
    """
    oracle = spec if isinstance(spec, PhaseOracle) else build_oracle(spec)
    n = oracle.n_in
    if n > MAX_SEARCH_QUBITS:
        raise SizeError(f"search register limited to {MAX_SEARCH_QUBITS} qubits, got {n}")
    if iterations == "auto":
        iterations = auto_iterations(n, len(oracle.marked))
    elif not isinstance(iterations, (int, np.integer)) or iterations < 0:
        raise ParameterError(f"iterations must be 'auto' or a non-negative integer, got {iterations!r}")

    state = new_state(n)
    for q in range(n):
        state = apply_single(state, H, q)
    for _ in range(int(iterations)):
        state = diffuse(oracle.apply(state))

    success = float(np.sum(np.abs(state.amplitudes[oracle.signs < 0]) ** 2))
    x = sample(state, range(n), seed)
    return GroverResult(x=x, success_probability=success, iterations=int(iterations), marked=oracle.marked)


def invert_function(f: TruthTable, y: str, seed=0, max_retries: int = 5, _oracle: PhaseOracle | None = None) -> str:
    """Find ``x`` with ``f(x) = y`` by Grover search, checking each answer classically."""
    oracle = _oracle if _oracle is not None else build_oracle(OracleSpec(f, y))
    if not oracle.marked:
        raise NoSolutionError(f"no input satisfies f(x) = {y}")
    rng = make_rng(seed)
    for _ in range(max(1, max_retries)):
        x = grover_search(oracle, "auto", rng).x
        if f(x) == y:
            return x
    raise SearchFailureError(f"no preimage of {y} found in {max_retries} attempts")


@dataclass(frozen=True)
class PipelineResult:
    winner: int
    id_bus: str
    y: str
    x: str


def pipeline_rounds(
    strategies: Sequence[np.ndarray],
    data: PlayerData,
    f: TruthTable,
    rounds: int,
    seed=0,
    max_retries: int = 5,
) -> list[PipelineResult]:
    """Arbitrate, load the winner's data bus as the oracle target, and invert ``f``.

    The data bus is consumed as its measured classical string.
    """
    if f.n_out != DATA_WIDTH:
        raise SizeError(f"f must produce {DATA_WIDTH}-bit outputs to match the data bus, got {f.n_out}")
    rng = make_rng(seed)
    results = []
    oracles: dict[str, PhaseOracle] = {}
    for game in play_rounds(strategies, data, rounds, rng):
        y = game.data_bus
        if y not in oracles:
            oracles[y] = build_oracle(OracleSpec(f, y))
        try:
            x = invert_function(f, y, rng, max_retries, _oracle=oracles[y])
        except NoSolutionError:
            raise NoSolutionError(f"player {game.winner} won but its data {y} has no preimage under f") from None
        results.append(PipelineResult(game.winner, game.id_bus, y, x))
    return results


def pipeline_round(strategies: Sequence[np.ndarray], data: PlayerData, f: TruthTable, seed=0) -> PipelineResult:
    return pipeline_rounds(strategies, data, f, 1, seed)[0]
