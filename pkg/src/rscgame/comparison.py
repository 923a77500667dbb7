"""Model comparisons and the reward/penalty-strength sweep.

The sweep reproduces the numerical study layout: rows pair the emission
strength f with the recycling strength k along the study's grid diagonal
and report the menu decisions of models IV and V side by side.  A shipped
reference table carries the published values for the same grid; produced
tables are compared cell-by-cell against it (deviations are reported, not
asserted, since the reference is not reproducible from the transcribed
formulas).

Ordering checks (model-V dominance per row, monotonicity down the grid
diagonal) are evaluated on every produced cell that is evaluable: oracle
cells always are; closed-form cells are skipped when their solution is
singular, screening-infeasible or out of range.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .closed_form import solve_closed_form
from .oracle import SolveOptions, solve_oracle
from .types import (
    COMPETITIVE_MODELS,
    InfeasibleMenuError,
    ModelParams,
    PricePair,
    SingularExpressionError,
    Solution,
)

SWEEP_COLUMNS = ("w_H4", "w_L4", "tau_H4", "tau_L4",
                 "w_H5", "w_L5", "tau_H5", "tau_L5")

_GROUPS = (frozenset({"I", "II"}), frozenset({"III", "IV", "V"}))

PROFIT_ROWS = ("profit_manufacturer", "profit_retailer1", "profit_retailer2",
               "profit_chain")


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    value_a: float | None
    value_b: float | None
    diff: float | None
    note: str = ""


@dataclass(frozen=True)
class ComparisonTable:
    pair: tuple[str, str]
    source: str
    rows: tuple[ComparisonRow, ...]
    notes: tuple[str, ...] = ()

    def row(self, name: str) -> ComparisonRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


def _solution_for(model_id: str, params: ModelParams, source: str,
                  prices: PricePair | None, opts: SolveOptions | None,
                  family: str) -> Solution:
    if source == "closed_form":
        return solve_closed_form(model_id, params, prices, family)
    return solve_oracle(model_id, params, opts)


def compare_models(params: ModelParams, pair: tuple[str, str],
                   source: str = "closed_form",
                   prices: PricePair | None = None,
                   opts: SolveOptions | None = None,
                   family: str = "harmonized") -> ComparisonTable:
    """Side-by-side decisions and profits with signed differences (a - b).

    ``source`` may also be "reference", which reads the shipped study table
    for pairs drawn from models IV and V at a grid (f, k) point.
    """
    a, b = pair
    if not any(a in g and b in g for g in _GROUPS):
        raise ValueError(f"models {a} and {b} have different decision structures")

    if source == "reference":
        return _compare_reference(params, pair)

    sol_a = _solution_for(a, params, source, prices, opts, family)
    sol_b = _solution_for(b, params, source, prices, opts, family)
    rows: list[ComparisonRow] = []
    for name, va in sol_a.decision_values().items():
        vb = sol_b.decision_values()[name]
        if va is None or vb is None:
            continue
        rows.append(ComparisonRow(name, va, vb, va - vb))
    flat_a, flat_b = sol_a.flat(), sol_b.flat()
    for name in PROFIT_ROWS:
        va, vb = flat_a[name], flat_b[name]
        if va is None or vb is None:
            continue
        rows.append(ComparisonRow(name, va, vb, va - vb))
    notes = []
    for label, sol in ((a, sol_a), (b, sol_b)):
        if sol.diagnostics.warnings:
            notes.append(f"model {label}: " + "; ".join(sol.diagnostics.warnings))
    return ComparisonTable(pair=pair, source=source, rows=tuple(rows),
                           notes=tuple(notes))


def _compare_reference(params: ModelParams, pair: tuple[str, str]) -> ComparisonTable:
    a, b = pair
    if {a, b} != {"IV", "V"}:
        raise ValueError("the reference table only covers models IV and V")
    row = None
    for ref in load_reference():
        if ref["f"] == params.f and ref["k"] == params.k:
            row = ref
            break
    if row is None:
        raise ValueError(f"(f={params.f}, k={params.k}) is not a reference grid point")
    suffix = {"IV": "4", "V": "5"}
    rows = []
    for var in ("w_H", "w_L", "tau_H", "tau_L"):
        va = row[f"{var}{suffix[a]}"]
        vb = row[f"{var}{suffix[b]}"]
        rows.append(ComparisonRow(var, va, vb, va - vb))
    return ComparisonTable(pair=pair, source="reference", rows=tuple(rows),
                           notes=("values from the shipped study reference table",))


@dataclass(frozen=True)
class SweepRow:
    f: float
    k: float
    values: dict[str, float | None]
    status: dict[str, str]  # per column: "ok" or a skip reason


@dataclass(frozen=True)
class SweepTable:
    source: str
    rows: tuple[SweepRow, ...]
    notes: tuple[str, ...] = ()


def _model_cells(model_id: str, suffix: str, params: ModelParams, source: str,
                 opts: SolveOptions | None, family: str
                 ) -> tuple[dict[str, float | None], dict[str, str]]:
    cols = [f"{v}{suffix}" for v in ("w_H", "w_L", "tau_H", "tau_L")]
    try:
        sol = _solution_for(model_id, params, source, None, opts, family)
    except SingularExpressionError as err:
        return ({c: None for c in cols}, {c: f"singular: {err.expression}" for c in cols})
    except InfeasibleMenuError as err:
        return ({c: None for c in cols}, {c: f"infeasible: {err.constraint}" for c in cols})
    values = dict(zip(cols, (sol.menu.w_H, sol.menu.w_L, sol.menu.tau_H, sol.menu.tau_L)))
    if source == "closed_form" and not sol.diagnostics.in_range:
        status = {c: "out_of_range" for c in cols}
    elif source == "closed_form" and not sol.diagnostics.feasible:
        status = {c: "infeasible_menu" for c in cols}
    else:
        status = {c: "ok" for c in cols}
    return values, status


def run_sweep(params: ModelParams, f_values, k_values, source: str = "oracle",
              opts: SolveOptions | None = None,
              family: str = "harmonized") -> SweepTable:
    """Model IV vs V menu decisions over the paired (f, k) grid diagonal."""
    f_values = tuple(float(v) for v in f_values)
    k_values = tuple(float(v) for v in k_values)
    if not f_values or not k_values:
        raise ValueError("sweep grids must be nonempty")
    if len(f_values) != len(k_values):
        raise ValueError("sweep pairs f and k rowwise; the grids must have equal length")
    rows = []
    for f, k in zip(f_values, k_values):
        row_params = params.with_(f=f, k=k)
        vals4, stat4 = _model_cells("IV", "4", row_params, source, opts, family)
        vals5, stat5 = _model_cells("V", "5", row_params, source, opts, family)
        rows.append(SweepRow(f=f, k=k, values={**vals4, **vals5},
                             status={**stat4, **stat5}))
    return SweepTable(source=source, rows=tuple(rows))


def load_reference() -> list[dict[str, float]]:
    """The shipped reference table (one dict per grid row)."""
    text = resources.files("rscgame.data").joinpath("table1_reference.csv").read_text()
    out = []
    for rec in csv.DictReader(text.splitlines()):
        out.append({key: float(val) for key, val in rec.items()})
    return out


def reference_deviations(table: SweepTable) -> list[dict[str, float | None]]:
    """Signed per-cell deviation (produced - reference); None when either
    side is missing."""
    reference = load_reference()
    out = []
    for row in table.rows:
        ref = next((r for r in reference if r["f"] == row.f and r["k"] == row.k), None)
        devs: dict[str, float | None] = {"f": row.f, "k": row.k}
        for col in SWEEP_COLUMNS:
            val = row.values[col]
            devs[col] = None if (ref is None or val is None) else val - ref[col]
        out.append(devs)
    return out


@dataclass(frozen=True)
class OrderingCheck:
    name: str
    outcome: str  # "pass" | "fail" | "skipped"
    detail: str = ""


def ordering_checks(table: SweepTable) -> list[OrderingCheck]:
    """Model-V dominance per row and per-column monotonicity down the rows.

    Cells whose status is not "ok" are skipped (with the reason recorded);
    a check involving only ok cells must actually hold to pass.
    """
    out: list[OrderingCheck] = []
    for i, row in enumerate(table.rows):
        for var in ("w_H", "w_L", "tau_H", "tau_L"):
            name = f"row {i + 1} (f={row.f:g}, k={row.k:g}): {var}5 > {var}4"
            s5, s4 = row.status[f"{var}5"], row.status[f"{var}4"]
            if s5 != "ok" or s4 != "ok":
                out.append(OrderingCheck(name, "skipped", f"{var}4: {s4}; {var}5: {s5}"))
                continue
            v5, v4 = row.values[f"{var}5"], row.values[f"{var}4"]
            ok = v5 > v4
            out.append(OrderingCheck(name, "pass" if ok else "fail",
                                     f"{v5:.6g} vs {v4:.6g}"))
    for col in SWEEP_COLUMNS:
        name = f"column {col} nondecreasing down the grid"
        pairs = []
        skipped = False
        for prev, nxt in zip(table.rows, table.rows[1:]):
            if prev.status[col] != "ok" or nxt.status[col] != "ok":
                skipped = True
                continue
            pairs.append((prev.values[col], nxt.values[col]))
        if not pairs:
            out.append(OrderingCheck(name, "skipped", "no adjacent evaluable cells"))
            continue
        ok = all(b >= a for a, b in pairs)
        detail = "; ".join(f"{a:.6g}->{b:.6g}" for a, b in pairs)
        if skipped:
            detail += " (some cells skipped)"
        out.append(OrderingCheck(name, "pass" if ok else "fail", detail))
    return out
