"""Deterministic CSV/JSON serialization and atomic file writes."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Sequence
from pathlib import Path

from .arbiter import GameRoundResult
from .duel import PayoffSurface
from .errors import ArbiterError
from .grover import PipelineResult

SIGNIFICANT_DIGITS = 10


class EmptyOutputError(ArbiterError):
    """Refusing to serialize an empty grid or log."""


def format_number(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed-point with ``digits`` significant digits: ``3 -> '3.000000000'``."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize {value!r}")
    if value == 0.0:
        return "0." + "0" * (digits - 1)
    decimals = max(0, digits - 1 - math.floor(math.log10(abs(value))))
    text = f"{value:.{decimals}f}"
    # rounding can carry into a new leading digit (9.9999999999 -> 10.000000000)
    if len(text.lstrip("-").replace(".", "").lstrip("0")) > digits and decimals > 0:
        text = f"{value:.{decimals - 1}f}"
    return "0." + "0" * (digits - 1) if float(text) == 0.0 else text


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow(format_number(v) if isinstance(v, float) else v for v in row)
        count += 1
    if count == 0:
        raise EmptyOutputError("nothing to serialize")
    return buf.getvalue()


def surface_csv(surface: PayoffSurface) -> str:
    return _csv(
        ("axis1_name", "axis1_value", "axis2_name", "axis2_value", "payoff_A", "payoff_B"),
        surface.rows(),
    )


def round_log_csv(rounds: Sequence[GameRoundResult]) -> str:
    return _csv(
        ("round", "winner", "id_bus", "data_bus"),
        ((i, r.winner, r.id_bus, r.data_bus) for i, r in enumerate(rounds, start=1)),
    )


def pipeline_csv(results: Sequence[PipelineResult]) -> str:
    return _csv(
        ("round", "winner", "id_bus", "data_bus", "x"),
        ((i, r.winner, r.id_bus, r.y, r.x) for i, r in enumerate(results, start=1)),
    )


def trace_csv(trace: Sequence[float]) -> str:
    return _csv(("generation", "best_fitness"), ((g, float(v)) for g, v in enumerate(trace, start=1)))


def json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path: Path, text: str) -> Path:
    """Write through a temporary file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
