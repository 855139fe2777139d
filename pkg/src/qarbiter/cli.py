"""``arbiter <mode> --scenario FILE [--seed N] [--out DIR]``

Exit status: 0 success, 2 invalid scenario, 3 runtime or search failure.
Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from . import arbiter, duel, ga, grover
from .errors import ArbiterError
from .published import PUBLISHED_SETS
from .output import (
    json_text,
    pipeline_csv,
    round_log_csv,
    surface_csv,
    trace_csv,
    write_atomic,
)
from .scenario import MODES, Scenario, ScenarioParseError, ValidationError, parse_scenario, strategy_set_document

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _distribution(dist) -> list[float]:
    return [float(v) for v in dist.as_array()]


def _run_duel(s: Scenario, out: Path) -> dict[str, Path]:
    ua, ub = (duel.strategy_gate(a) for a in s.duel_strategies)
    dist = duel.play_game(s.model, ua, ub)
    pa, pb = duel.expected_payoffs(dist, s.payoff_table)
    report = {
        "model": s.model.variant,
        "gamma": s.model.gamma,
        "distribution": dict(zip(duel.OUTCOMES, _distribution(dist))),
        "payoffs": {"A": pa, "B": pb},
    }
    return {"report": write_atomic(out / "duel.json", json_text(report))}


def _run_surface(s: Scenario, out: Path) -> dict[str, Path]:
    surface = duel.payoff_surface(s.model, *s.axes, s.payoff_table, s.resolution, s.fixed)
    return {"surface": write_atomic(out / "surface.csv", surface_csv(surface))}


def _run_arbiter(s: Scenario, out: Path) -> dict[str, Path]:
    rounds = arbiter.play_rounds(s.strategies, s.data, s.rounds, s.seed)
    counts = Counter(r.winner for r in rounds)
    summary = {
        "rounds": s.rounds,
        "seed": s.seed,
        "data": list(s.data.bits),
        "winner_distribution": _distribution(arbiter.winner_distribution(s.strategies)),
        "winner_frequencies": [counts[k] / s.rounds for k in range(1, 5)],
    }
    return {
        "rounds": write_atomic(out / "rounds.csv", round_log_csv(rounds)),
        "summary": write_atomic(out / "summary.json", json_text(summary)),
    }


def _run_optimize(s: Scenario, out: Path) -> dict[str, Path]:
    result = ga.evolve(s.priorities, s.ga_config())
    doc = strategy_set_document(
        result.best,
        target=list(s.priorities),
        achieved=_distribution(result.achieved),
    )
    report = {
        "target": list(s.priorities),
        "achieved": _distribution(result.achieved),
        "fitness": result.fitness,
        "max_deviation": result.max_deviation,
        "config": vars(s.ga_config()),
    }
    return {
        "strategies": write_atomic(out / "strategies.json", json_text(doc)),
        "trace": write_atomic(out / "trace.csv", trace_csv(result.fitness_trace)),
        "report": write_atomic(out / "optimize.json", json_text(report)),
    }


def _run_verify(s: Scenario, out: Path) -> dict[str, Path]:
    matrices = PUBLISHED_SETS[s.published].matrices if s.published else s.strategies
    report = ga.verify_strategy_set(matrices, s.expected, s.tolerance)
    doc = {"set": s.published or "inline", **report.as_dict()}
    path = write_atomic(out / "verify.json", json_text(doc))
    if not report.passed:
        raise ArbiterError(f"verification failed: max deviation {report.max_deviation:.3g} > {s.tolerance}")
    return {"report": path}


def _run_grover(s: Scenario, out: Path) -> dict[str, Path]:
    result = grover.grover_search(grover.OracleSpec(s.truth_table, s.target), s.iterations, s.seed)
    report = {
        "target": s.target,
        "x": result.x,
        "f(x)": s.truth_table(result.x),
        "iterations": result.iterations,
        "marked": list(result.marked),
        "success_probability": result.success_probability,
    }
    return {"report": write_atomic(out / "grover.json", json_text(report))}


def _run_pipeline(s: Scenario, out: Path) -> dict[str, Path]:
    results = grover.pipeline_rounds(s.strategies, s.data, s.truth_table, s.rounds, s.seed)
    counts = Counter(r.winner for r in results)
    summary = {
        "rounds": s.rounds,
        "seed": s.seed,
        "winner_distribution": _distribution(arbiter.winner_distribution(s.strategies)),
        "winner_frequencies": [counts[k] / s.rounds for k in range(1, 5)],
        "all_verified": all(s.truth_table(r.x) == r.y for r in results),
    }
    return {
        "log": write_atomic(out / "pipeline.csv", pipeline_csv(results)),
        "summary": write_atomic(out / "summary.json", json_text(summary)),
    }


_RUNNERS = {
    "duel": _run_duel,
    "surface": _run_surface,
    "arbiter": _run_arbiter,
    "optimize": _run_optimize,
    "verify": _run_verify,
    "grover": _run_grover,
    "pipeline": _run_pipeline,
}


def run_scenario(s: Scenario, out_dir: str | Path = ".") -> dict[str, Path]:
    """Execute a parsed scenario and return the files written."""
    return _RUNNERS[s.mode](s, Path(out_dir))


def _report(kind: str, exc: BaseException, **extra) -> None:
    doc = {"error": kind, "type": type(exc).__name__, "message": str(exc), **extra}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="arbiter", description="Quantum-game access controller experiments.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    args = parser.parse_args(argv)

    try:
        text = args.scenario.read_text(encoding="utf-8")
    except OSError as exc:
        _report("validation", exc, field="scenario")
        return EXIT_VALIDATION
    try:
        s = parse_scenario(text, args.mode, base_dir=args.scenario.parent)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ValidationError("--seed", "must be an unsigned 64-bit integer")
            s.seed = args.seed
            if s.mode == "optimize":
                s.ga_config()
    except ScenarioParseError as exc:
        _report("parse", exc, line=exc.line, column=exc.column)
        return EXIT_VALIDATION
    except ValidationError as exc:
        _report("validation", exc, field=exc.path)
        return EXIT_VALIDATION

    try:
        written = run_scenario(s, args.out)
    except ArbiterError as exc:
        _report("runtime", exc, mode=s.mode)
        return EXIT_RUNTIME
    for name, path in written.items():
        print(f"{name}: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
