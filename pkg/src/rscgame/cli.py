"""Command-line front end.

Subcommands:

  solve         one model, one or both solution sources -> solution.csv
  sweep         model IV vs V over the (f, k) grid -> sweep.csv
  propositions  the eight comparative-statics checks -> propositions.csv
  crosscheck    closed form vs oracle per variable -> crosscheck.csv

Every run also writes diagnostics.txt.  Numbers are written with 12
significant digits so files re-parse to the same values, and identical
configurations produce byte-identical outputs (fixed seeds, deterministic
tie-breaking, no timestamps).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .closed_form import solve_closed_form
from .comparison import (
    SWEEP_COLUMNS,
    ordering_checks,
    reference_deviations,
    run_sweep,
)
from .config import ConfigError, RunConfig, load_config
from .oracle import cross_check, solve_oracle
from .propositions import check_all_propositions, check_proposition
from .sampling import feasible_draws
from .types import (
    SOLUTION_CSV_COLUMNS,
    DivergenceError,
    InfeasibleMenuError,
    SingularExpressionError,
    Solution,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_SINGULAR = 4
EXIT_DIVERGED = 5


def fmt(value) -> str:
    """Canonical CSV cell text (12 significant digits for floats)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])


def _config_echo(cfg: RunConfig) -> list[str]:
    lines = [f"rscgame {__version__}"]
    lines.extend(cfg.defaults_note())
    for key, val in sorted(asdict(cfg.params).items()):
        lines.append(f"param {key} = {fmt(val)}")
    for key, val in sorted(cfg.metadata.items()):
        lines.append(f"metadata {key} = {fmt(val)} (informational only)")
    lines.append(f"source = {cfg.source}; family = {cfg.family}; seed = {cfg.seed}; "
                 f"tol = {fmt(cfg.tol)}")
    lines.append(f"evaluation prices p1 = {fmt(cfg.p1_eval)}, p2 = {fmt(cfg.p2_eval)}")
    return lines


def _write_diagnostics(out: Path, lines: list[str]) -> None:
    (out / "diagnostics.txt").write_text("\n".join(lines) + "\n")


def _solution_rows(solutions: list[Solution]):
    for sol in solutions:
        flat = sol.flat()
        yield [flat[col] for col in SOLUTION_CSV_COLUMNS]


def cmd_solve(cfg: RunConfig, out: Path) -> int:
    if cfg.model is None:
        print("solve: --model is required", file=sys.stderr)
        return EXIT_CONFIG
    diag = _config_echo(cfg)
    solutions: list[Solution] = []
    if cfg.source in ("closed_form", "both"):
        solutions.append(solve_closed_form(cfg.model, cfg.params, cfg.eval_prices(),
                                           cfg.family, tol=cfg.tol,
                                           transfer_on_deviation=cfg.solve.transfer_on_deviation))
    if cfg.source in ("oracle", "both"):
        solutions.append(solve_oracle(cfg.model, cfg.params, cfg.solve))
    write_csv(out / "solution.csv", SOLUTION_CSV_COLUMNS, _solution_rows(solutions))
    for sol in solutions:
        diag.append(f"[{sol.provenance}] feasible={fmt(sol.diagnostics.feasible)} "
                    f"in_range={fmt(sol.diagnostics.in_range)}")
        for w in sol.diagnostics.warnings:
            diag.append(f"[{sol.provenance}] warning: {w}")
        for note in sol.diagnostics.notes:
            diag.append(f"[{sol.provenance}] note: {note}")
        if sol.diagnostics.stationarity:
            for stage, residual in sorted(sol.diagnostics.stationarity.items()):
                diag.append(f"[{sol.provenance}] stationarity {stage} = {fmt(residual)}")
    if cfg.source == "both":
        _write_crosscheck_csv(cfg, out)
        diag.append("cross-check written to crosscheck.csv")
    _write_diagnostics(out, diag)
    return EXIT_OK


def _write_crosscheck_csv(cfg: RunConfig, out: Path) -> None:
    report = cross_check(cfg.model, cfg.params, cfg.solve, cfg.eval_prices(), cfg.family)
    header = ("variable", "closed_form", "status", "oracle", "abs_dev", "rel_dev")
    rows = [[v.name, v.closed_form, v.status, v.oracle, v.abs_dev, v.rel_dev]
            for v in report.variables]
    write_csv(out / "crosscheck.csv", header, rows)


def cmd_crosscheck(cfg: RunConfig, out: Path) -> int:
    if cfg.model is None:
        print("crosscheck: --model is required", file=sys.stderr)
        return EXIT_CONFIG
    _write_crosscheck_csv(cfg, out)
    report = cross_check(cfg.model, cfg.params, cfg.solve, cfg.eval_prices(), cfg.family)
    diag = _config_echo(cfg) + [f"crosscheck note: {n}" for n in report.notes]
    _write_diagnostics(out, diag)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out: Path) -> int:
    sources = ["closed_form", "oracle"] if cfg.source == "both" else [cfg.source]
    header = (("source", "f", "k")
              + SWEEP_COLUMNS
              + tuple(f"dev_{c}" for c in SWEEP_COLUMNS)
              + tuple(f"status_{c}" for c in SWEEP_COLUMNS))
    rows = []
    diag = _config_echo(cfg)
    for source in sources:
        table = run_sweep(cfg.params, cfg.sweep_f, cfg.sweep_k, source,
                          cfg.solve, cfg.family)
        devs = reference_deviations(table)
        for row, dev in zip(table.rows, devs):
            rows.append([source, row.f, row.k]
                        + [row.values[c] for c in SWEEP_COLUMNS]
                        + [dev[c] for c in SWEEP_COLUMNS]
                        + [row.status[c] for c in SWEEP_COLUMNS])
        for check in ordering_checks(table):
            diag.append(f"[{source}] {check.outcome.upper()}: {check.name} ({check.detail})")
    write_csv(out / "sweep.csv", header, rows)
    reference_rows = [[r["f"], r["k"]] + [r[c] for c in SWEEP_COLUMNS]
                      for r in _reference_rows()]
    write_csv(out / "table1_reference.csv", ("f", "k") + SWEEP_COLUMNS, reference_rows)
    _write_diagnostics(out, diag)
    return EXIT_OK


def _reference_rows():
    from .comparison import load_reference

    return load_reference()


def _condition_text(report) -> str:
    parts = []
    for branch in report.branches:
        for c in branch.conditions:
            outcome = "pass" if c.passed else "fail"
            parts.append(f"{branch.name}: {c.name}: {fmt(c.value)} {c.relation} "
                         f"{fmt(c.threshold)} [{outcome}]")
    return "; ".join(parts)


def _conclusion_text(report) -> str:
    parts = []
    for branch in report.branches:
        for c in branch.conclusions:
            outcome = "pass" if c.passed else "fail"
            parts.append(f"{branch.name}: {c.name}: {fmt(c.value)} {c.relation} "
                         f"{fmt(c.threshold)} [{outcome}]")
    return "; ".join(parts)


def cmd_propositions(cfg: RunConfig, out: Path) -> int:
    sources = ["closed_form", "oracle"] if cfg.source == "both" else [cfg.source]
    header = ("proposition", "source", "family", "verdict", "conditions",
              "conclusions", "error")
    rows = []
    diag = _config_echo(cfg)
    for source in sources:
        family = "literal" if source == "closed_form" else cfg.family
        reports = check_all_propositions(cfg.params, source, cfg.eval_prices(),
                                         cfg.solve, family)
        for rep in reports:
            rows.append([rep.number, rep.source, rep.family, rep.verdict,
                         _condition_text(rep), _conclusion_text(rep), rep.error])
            diag.append(f"[{source}] proposition {rep.number}: {rep.verdict}")

    # seeded random-draw property: the emission charge lowers both recycling
    # rates (via closed forms) on every sampled parameter set
    held = 0
    draws = feasible_draws(100, seed=cfg.seed)
    for case in draws:
        rep = check_proposition(2, case.params, "closed_form", case.prices)
        if rep.verdict == "holds":
            held += 1
    rows.append(["prop2_random_draws", "closed_form", "literal",
                 "holds" if held == len(draws) else "fails",
                 f"seed={cfg.seed}; draws={len(draws)}",
                 f"held on {held}/{len(draws)} draws", ""])
    diag.append(f"prop2 random draws: {held}/{len(draws)} held (seed {cfg.seed})")

    write_csv(out / "propositions.csv", header, rows)
    _write_diagnostics(out, diag)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rscgame",
        description="Solvers and checks for the five reverse-supply-chain "
                    "recycling game models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_model in (("solve", True), ("sweep", False),
                              ("propositions", False), ("crosscheck", True)):
        p = sub.add_parser(name)
        p.add_argument("--model", choices=("I", "II", "III", "IV", "V"),
                       required=False, help="model to solve")
        p.add_argument("--params", type=str, default=None,
                       help="path to a JSON parameter/config file")
        p.add_argument("--set", dest="sets", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config key (repeatable; solve.* for "
                            "numerical options)")
        p.add_argument("--source", choices=("closed_form", "oracle", "both"),
                       default=None)
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.set_defaults(needs_model=needs_model)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sets = list(args.sets)
    if args.model is not None:
        sets.append(f"model={args.model}")
    if args.source is not None:
        sets.append(f"source={args.source}")
    if args.seed is not None:
        sets.append(f"seed={args.seed}")
    if args.tol is not None:
        sets.append(f"tol={args.tol}")
    try:
        cfg = load_config(args.params, sets)
    except ConfigError as err:
        print(str(err), file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "solve":
            return cmd_solve(cfg, out)
        if args.command == "sweep":
            return cmd_sweep(cfg, out)
        if args.command == "propositions":
            return cmd_propositions(cfg, out)
        if args.command == "crosscheck":
            return cmd_crosscheck(cfg, out)
    except InfeasibleMenuError as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SingularExpressionError as err:
        print(f"singular: {err}", file=sys.stderr)
        return EXIT_SINGULAR
    except DivergenceError as err:
        print(f"diverged: {err}", file=sys.stderr)
        return EXIT_DIVERGED
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
