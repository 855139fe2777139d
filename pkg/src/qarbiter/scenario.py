"""Scenario documents for the ``arbiter`` command line.

A scenario is a strict JSON object: unknown or duplicate fields are errors,
and every range is checked before anything runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .arbiter import TABLE2_DATA, PlayerData
from .duel import AXES, PAYOFF_PRESETS, GameModel, PayoffTable, StrategyAngles, strategy_gate
from .errors import ArbiterError
from .ga import GaConfig, check_priorities, nearest_unitary
from .grover import TruthTable
from .published import PUBLISHED_SETS
from .statevector import H, I2, check_unitary

MODES = ("duel", "surface", "arbiter", "optimize", "verify", "grover", "pipeline")

_COMMON = {"mode", "seed"}
_FIELDS = {
    "duel": {"model", "gamma", "strategies", "payoff_table"},
    "surface": {"model", "gamma", "axes", "resolution", "fixed", "payoff_table"},
    "arbiter": {"strategies", "data", "rounds"},
    "optimize": {"priorities", "ga"},
    "verify": {"published", "strategies", "expected", "tolerance"},
    "grover": {"truth_table", "target", "iterations"},
    "pipeline": {"strategies", "data", "truth_table", "rounds"},
}
_REQUIRED = {
    "duel": {"strategies"},
    "surface": {"axes"},
    "arbiter": {"strategies"},
    "optimize": {"priorities"},
    "verify": set(),
    "grover": {"truth_table", "target"},
    "pipeline": {"strategies", "truth_table"},
}
_GA_FIELDS = {"population", "generations", "mutation_rate", "crossover_rate", "elitism", "tournament_size"}


class ScenarioParseError(ArbiterError):
    """The document is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(ArbiterError, ValueError):
    """A field is missing, unknown, duplicated or out of range."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class Scenario:
    mode: str
    seed: int = 0
    model: GameModel | None = None
    duel_strategies: tuple[StrategyAngles, StrategyAngles] | None = None
    payoff_table: PayoffTable | None = None
    axes: tuple[str, str] | None = None
    resolution: int = 64
    fixed: tuple[StrategyAngles, StrategyAngles] | None = None
    strategies: list[np.ndarray] | None = None
    data: PlayerData = TABLE2_DATA
    rounds: int = 1
    priorities: tuple[float, ...] | None = None
    ga: dict[str, Any] = field(default_factory=dict)
    published: str | None = None
    expected: tuple[float, ...] | None = None
    tolerance: float = 2e-3
    truth_table: TruthTable | None = None
    target: str | None = None
    iterations: int | str = "auto"
    base_dir: Path = Path(".")

    def ga_config(self, seed: int | None = None) -> GaConfig:
        return GaConfig(seed=self.seed if seed is None else seed, **self.ga)


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ValidationError(key, "duplicate field")
        out[key] = value
    return out


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValidationError(path, f"expected a finite number, got {value!r}")
    return float(value)


def _integer(value, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(path, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(path, f"must be at least {minimum}, got {value}")
    return value


def _object(value, path: str, allowed: set[str]) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(path, "expected an object")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ValidationError(f"{path}.{unknown[0]}" if path else unknown[0], "unknown field")
    return value


def _angles(value, path: str) -> StrategyAngles:
    doc = _object(value, path, {"theta", "phi", "psi"})
    try:
        return StrategyAngles(**{k: _number(v, f"{path}.{k}") for k, v in doc.items()})
    except ArbiterError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(path, str(exc)) from None


def _complex_matrix(value, path: str) -> np.ndarray:
    try:
        m = np.array(
            [[complex(_number(re, path), _number(im, path)) for re, im in row] for row in value],
            dtype=complex,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(path, "expected a 2x2 matrix of [re, im] pairs") from None
    if m.shape != (2, 2):
        raise ValidationError(path, "expected a 2x2 matrix of [re, im] pairs")
    return m


def _gate(value, path: str) -> np.ndarray:
    if value == "H":
        return H
    if value == "I":
        return I2
    doc = _object(value, path, {"angles", "matrix"})
    if len(doc) != 1:
        raise ValidationError(path, "give exactly one of 'angles' or 'matrix'")
    if "angles" in doc:
        return strategy_gate(_angles(doc["angles"], f"{path}.angles"))
    m = _complex_matrix(doc["matrix"], f"{path}.matrix")
    try:
        return check_unitary(m)
    except ArbiterError as exc:
        raise ValidationError(f"{path}.matrix", str(exc)) from None


def _strategy_set(value, path: str, base_dir: Path) -> list[np.ndarray]:
    """List of 4 gate specs, a strategy-set document, a file reference or a published set."""
    if isinstance(value, list):
        if len(value) != 4:
            raise ValidationError(path, f"expected 4 strategies, got {len(value)}")
        return [_gate(v, f"{path}[{k}]") for k, v in enumerate(value)]
    doc = _object(value, path, {"published", "file", "players"})
    if len(doc) != 1:
        raise ValidationError(path, "give exactly one of 'published', 'file' or 'players'")
    if "published" in doc:
        name = doc["published"]
        if name not in PUBLISHED_SETS:
            raise ValidationError(f"{path}.published", f"unknown set {name!r}; known: {sorted(PUBLISHED_SETS)}")
        return [nearest_unitary(m) for m in PUBLISHED_SETS[name].matrices]
    if "file" in doc:
        file = base_dir / str(doc["file"])
        try:
            loaded = json.loads(file.read_text(), object_pairs_hook=_no_duplicates)
        except OSError as exc:
            raise ValidationError(f"{path}.file", f"cannot read {file}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}.file", f"malformed JSON at line {exc.lineno}, column {exc.colno}") from None
        return read_strategy_set(loaded, f"{path}.file")
    return read_strategy_set(doc, path)


def read_strategy_set(doc, path: str = "") -> list[np.ndarray]:
    """Gates from a ``{"players": [{"player": k, "matrix": [[[re, im], ...], ...]}, ...]}`` document."""
    doc = _object(doc, path, {"players", "achieved", "target"})
    players = doc.get("players")
    if not isinstance(players, list) or len(players) != 4:
        raise ValidationError(f"{path}.players", "expected a list of 4 players")
    gates = []
    for k, entry in enumerate(players):
        p = f"{path}.players[{k}]"
        entry = _object(entry, p, {"player", "matrix"})
        if "matrix" not in entry:
            raise ValidationError(f"{p}.matrix", "missing field")
        gates.append(_gate({"matrix": entry["matrix"]}, p))
    return gates


def strategy_set_document(gates, **extra) -> dict:
    players = [
        {"player": k, "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(u)]}
        for k, u in enumerate(gates, start=1)
    ]
    return {"players": players, **extra}


def _payoff_table(value, path: str) -> PayoffTable:
    if isinstance(value, str):
        if value not in PAYOFF_PRESETS:
            raise ValidationError(path, f"unknown preset {value!r}; known: {sorted(PAYOFF_PRESETS)}")
        return PAYOFF_PRESETS[value]
    doc = _object(value, path, {"CC", "CD", "DC", "DD"})
    pairs = {}
    for key in ("CC", "CD", "DC", "DD"):
        if key not in doc:
            raise ValidationError(f"{path}.{key}", "missing field")
        pair = doc[key]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(f"{path}.{key}", "expected [payoff_A, payoff_B]")
        pairs[key.lower()] = tuple(_number(v, f"{path}.{key}") for v in pair)
    return PayoffTable(**pairs)


def _model(doc: dict) -> GameModel:
    variant = doc.get("model", "simplified")
    if variant not in ("original", "simplified"):
        raise ValidationError("model", f"expected 'original' or 'simplified', got {variant!r}")
    gamma = _number(doc.get("gamma", math.pi / 2), "gamma")
    if not 0 < gamma < math.pi:
        raise ValidationError("gamma", "out of (0,pi)")
    return GameModel(variant, gamma)


def _player_pair(value, path: str) -> tuple[StrategyAngles, StrategyAngles]:
    doc = _object(value, path, {"A", "B"})
    return _angles(doc.get("A", {}), f"{path}.A"), _angles(doc.get("B", {}), f"{path}.B")


def _probabilities(value, path: str) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != 4:
        raise ValidationError(path, "expected a list of 4 numbers")
    nums = [_number(v, f"{path}[{k}]") for k, v in enumerate(value)]
    for k, v in enumerate(nums):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{path}[{k}]", "out of [0,1]")
    return tuple(nums)


def _truth_table(value, path: str, base_dir: Path) -> TruthTable:
    try:
        if isinstance(value, str):
            file = base_dir / value
            try:
                doc = json.loads(file.read_text(), object_pairs_hook=_no_duplicates)
            except OSError as exc:
                raise ValidationError(path, f"cannot read {file}: {exc.strerror}") from None
            except json.JSONDecodeError as exc:
                raise ValidationError(path, f"malformed JSON at line {exc.lineno}, column {exc.colno}") from None
            return TruthTable.from_json(_object(doc, path, {"n_in", "n_out", "table"}))
        return TruthTable.from_json(_object(value, path, {"n_in", "n_out", "table"}))
    except ValidationError:
        raise
    except (ArbiterError, TypeError, ValueError) as exc:
        raise ValidationError(path, str(exc)) from None


def parse_scenario(text: str, mode: str | None = None, base_dir: str | Path = ".") -> Scenario:
    """Parse and validate a scenario document.

    ``mode`` (the CLI subcommand) fills in a missing ``"mode"`` field and must
    agree with it when both are given. Relative file references resolve
    against ``base_dir``.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("", "scenario must be a JSON object")

    doc_mode = doc.get("mode", mode)
    if doc_mode not in MODES:
        raise ValidationError("mode", f"expected one of {list(MODES)}, got {doc_mode!r}")
    if mode is not None and doc_mode != mode:
        raise ValidationError("mode", f"scenario is for {doc_mode!r} but {mode!r} was requested")
    _object(doc, "", _COMMON | _FIELDS[doc_mode])
    for name in sorted(_REQUIRED[doc_mode]):
        if name not in doc:
            raise ValidationError(name, "missing field")

    base = Path(base_dir)
    s = Scenario(mode=doc_mode, base_dir=base)
    if "seed" in doc:
        s.seed = _integer(doc["seed"], "seed")
        if s.seed >= 2**64:
            raise ValidationError("seed", "must fit in 64 bits")

    if doc_mode in ("duel", "surface"):
        s.model = _model(doc)
        s.payoff_table = _payoff_table(doc.get("payoff_table", "prisoners-dilemma"), "payoff_table")
    if doc_mode == "duel":
        s.duel_strategies = _player_pair(doc["strategies"], "strategies")
    if doc_mode == "surface":
        axes = doc["axes"]
        if not isinstance(axes, list) or len(axes) != 2:
            raise ValidationError("axes", "expected two axis names")
        for k, a in enumerate(axes):
            if a not in AXES:
                raise ValidationError(f"axes[{k}]", f"unknown axis {a!r}; expected one of {sorted(AXES)}")
        if axes[0] == axes[1]:
            raise ValidationError("axes", "the two axes must differ")
        s.axes = (axes[0], axes[1])
        s.resolution = _integer(doc.get("resolution", 64), "resolution", minimum=2)
        if "fixed" in doc:
            s.fixed = _player_pair(doc["fixed"], "fixed")

    if doc_mode in ("arbiter", "pipeline"):
        s.strategies = _strategy_set(doc["strategies"], "strategies", base)
        if "data" in doc:
            data = doc["data"]
            if not isinstance(data, list):
                raise ValidationError("data", "expected a list of 4 bitstrings")
            try:
                s.data = PlayerData(tuple(data))
            except ArbiterError as exc:
                raise ValidationError("data", str(exc)) from None
        s.rounds = _integer(doc.get("rounds", 1), "rounds", minimum=1)

    if doc_mode == "optimize":
        raw = doc["priorities"]
        if not isinstance(raw, list) or len(raw) != 4:
            raise ValidationError("priorities", "expected a list of 4 numbers")
        try:
            s.priorities = check_priorities([_number(v, f"priorities[{k}]") for k, v in enumerate(raw)])
        except ValidationError:
            raise
        except ArbiterError as exc:
            raise ValidationError("priorities", str(exc)) from None
        ga = _object(doc.get("ga", {}), "ga", _GA_FIELDS)
        for key, v in ga.items():
            s.ga[key] = _number(v, f"ga.{key}") if key.endswith("_rate") else _integer(v, f"ga.{key}", 1)
        try:
            s.ga_config()
        except ArbiterError as exc:
            raise ValidationError("ga", str(exc)) from None

    if doc_mode == "verify":
        has_pub, has_raw = "published" in doc, "strategies" in doc
        if has_pub == has_raw:
            raise ValidationError("published", "give exactly one of 'published' or 'strategies'")
        if has_pub:
            s.published = doc["published"]
            if s.published not in PUBLISHED_SETS:
                raise ValidationError("published", f"unknown set {s.published!r}; known: {sorted(PUBLISHED_SETS)}")
            s.expected = PUBLISHED_SETS[s.published].reported
        else:
            raw = doc["strategies"]
            if not isinstance(raw, list) or len(raw) != 4:
                raise ValidationError("strategies", "expected 4 matrices")
            # raw matrices may be rounded; verification projects them itself
            s.strategies = [_complex_matrix(m, f"strategies[{k}]") for k, m in enumerate(raw)]
            for k, m in enumerate(s.strategies):
                gap = float(np.abs(nearest_unitary(m) - m).max())
                if gap > 0.01:
                    raise ValidationError(f"strategies[{k}]", f"matrix is {gap:.4f} away from the nearest unitary")
        if "expected" in doc:
            s.expected = _probabilities(doc["expected"], "expected")
        if s.expected is None:
            raise ValidationError("expected", "missing field")
        s.tolerance = _number(doc.get("tolerance", 2e-3), "tolerance")
        if s.tolerance <= 0:
            raise ValidationError("tolerance", "must be positive")

    if doc_mode in ("grover", "pipeline"):
        s.truth_table = _truth_table(doc["truth_table"], "truth_table", base)
    if doc_mode == "grover":
        target = doc["target"]
        if not isinstance(target, str) or len(target) != s.truth_table.n_out or set(target) - {"0", "1"}:
            raise ValidationError("target", f"expected a {s.truth_table.n_out}-bit string")
        s.target = target
        if s.truth_table.n_in > 12:
            raise ValidationError("truth_table", "search register limited to 12 qubits")
        it = doc.get("iterations", "auto")
        s.iterations = it if it == "auto" else _integer(it, "iterations")
    if doc_mode == "pipeline" and s.truth_table.n_out != 4:
        raise ValidationError("truth_table", "n_out must equal the 4-bit data bus width")
    return s
