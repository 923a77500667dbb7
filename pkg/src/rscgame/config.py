"""Run configuration: JSON file plus ``--set key=value`` overrides.

The configuration is a flat JSON object holding the model parameters, the
run flags and an optional nested ``solve`` object with the numerical
controls.  Unknown keys are rejected, and validation reports *every*
violated invariant at once.  All defaults come from the numerical-study
baseline; ``mu`` (0.5) and ``pi_R0`` (0) have no published value and their
defaults are echoed in every report header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .oracle import SolveOptions
from .types import COMPETITIVE_MODELS, MODELS, ModelParams, PricePair, section6_params

SOURCES = ("closed_form", "oracle", "both")
FAMILIES = ("literal", "harmonized")

_PARAM_KEYS = tuple(f.name for f in fields(ModelParams))
_SOLVE_KEYS = tuple(f.name for f in fields(SolveOptions))

#: informational keys accepted and echoed, never used in computations
_METADATA_KEYS = ("I_H", "I_L")

_TOP_KEYS = _PARAM_KEYS + _METADATA_KEYS + (
    "model", "source", "family", "p1_eval", "p2_eval",
    "seed", "tol", "sweep_f", "sweep_k", "solve",
)

DEFAULTS: dict = {
    "model": None,
    "source": "both",
    "family": "harmonized",
    "p1_eval": 1.7,
    "p2_eval": 1.9,
    "seed": 20240817,
    "tol": 1e-6,
    "sweep_f": [3.0, 5.0, 7.0, 9.0],
    "sweep_k": [2.0, 4.0, 6.0, 8.0],
    "I_H": 40.0,
    "I_L": 30.0,
}


class ConfigError(ValueError):
    """Invalid configuration; ``problems`` lists every violation."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(problems))


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    solve: SolveOptions
    model: str | None
    source: str
    family: str
    p1_eval: float
    p2_eval: float | None
    seed: int
    tol: float
    sweep_f: tuple[float, ...]
    sweep_k: tuple[float, ...]
    metadata: dict

    def eval_prices(self) -> PricePair:
        """Evaluation/starting prices for the closed forms and iterations."""
        if self.model in COMPETITIVE_MODELS:
            return PricePair(p1=self.p1_eval, p2=self.p2_eval)
        return PricePair(p1=self.p1_eval, p2=None)

    def defaults_note(self) -> list[str]:
        notes = []
        if self.params.mu == 0.5:
            notes.append("mu = 0.5 (package default; no published value)")
        if self.params.pi_R0 == 0.0:
            notes.append("pi_R0 = 0 (package default; no published value)")
        return notes


def _parse_set_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_sets(tree: dict, assignments: list[str]) -> dict:
    """Apply ``key=value`` overrides; dotted keys address the solve block."""
    out = dict(tree)
    out["solve"] = dict(tree.get("solve", {}))
    for item in assignments:
        if "=" not in item:
            raise ConfigError([f"--set needs key=value, got {item!r}"])
        key, _, raw = item.partition("=")
        key = key.strip()
        value = _parse_set_value(raw.strip())
        if key.startswith("solve."):
            out["solve"][key[len("solve."):]] = value
        else:
            out[key] = value
    return out


def load_config(path: str | Path | None = None,
                assignments: list[str] | None = None) -> RunConfig:
    """Build a validated RunConfig from defaults, a JSON file and overrides."""
    tree: dict = {}
    if path is not None:
        try:
            tree = json.loads(Path(path).read_text())
        except json.JSONDecodeError as err:
            raise ConfigError([f"{path}: not valid JSON ({err})"]) from err
        if not isinstance(tree, dict):
            raise ConfigError([f"{path}: top level must be an object"])
    if assignments:
        tree = apply_sets(tree, assignments)
    return config_from_tree(tree)


def config_from_tree(tree: dict) -> RunConfig:
    problems: list[str] = []

    unknown = [k for k in tree if k not in _TOP_KEYS]
    for k in sorted(unknown):
        problems.append(f"unknown key {k!r}")
    solve_tree = tree.get("solve", {})
    if not isinstance(solve_tree, dict):
        problems.append("'solve' must be an object")
        solve_tree = {}
    for k in sorted(set(solve_tree) - set(_SOLVE_KEYS)):
        problems.append(f"unknown key 'solve.{k}'")
    if problems:
        raise ConfigError(problems)

    param_kwargs = {k: tree.get(k) for k in _PARAM_KEYS if k in tree}
    params = section6_params(**param_kwargs)
    problems.extend(params.violations())

    merged = {**DEFAULTS, **{k: v for k, v in tree.items()
                             if k not in _PARAM_KEYS and k != "solve"}}

    model = merged["model"]
    if model is not None and model not in MODELS:
        problems.append(f"model must be one of {MODELS} (got {model!r})")
    if merged["source"] not in SOURCES:
        problems.append(f"source must be one of {SOURCES} (got {merged['source']!r})")
    if merged["family"] not in FAMILIES:
        problems.append(f"family must be one of {FAMILIES} (got {merged['family']!r})")
    if merged["p1_eval"] is None:
        problems.append("p1_eval must be a number (closed forms for models I-II need it)")
    if model in COMPETITIVE_MODELS and merged["p2_eval"] is None:
        problems.append(f"p2_eval is required for model {model}")
    if not isinstance(merged["seed"], int) or merged["seed"] < 0:
        problems.append(f"seed must be a nonnegative integer (got {merged['seed']!r})")
    if not isinstance(merged["tol"], (int, float)) or merged["tol"] <= 0:
        problems.append(f"tol must be positive (got {merged['tol']!r})")
    for grid_name in ("sweep_f", "sweep_k"):
        grid = merged[grid_name]
        if not isinstance(grid, (list, tuple)) or not grid \
                or not all(isinstance(v, (int, float)) for v in grid):
            problems.append(f"{grid_name} must be a nonempty list of numbers")

    try:
        solve = SolveOptions(**{k: solve_tree[k] for k in solve_tree})
        if merged["tol"] is not None and isinstance(merged["tol"], (int, float)) \
                and merged["tol"] > 0 and "feas_tol" not in solve_tree:
            solve = SolveOptions(**{**{k: getattr(solve, k) for k in _SOLVE_KEYS},
                                    "feas_tol": float(merged["tol"])})
    except (TypeError, ValueError) as err:
        problems.append(f"solve options: {err}")
        solve = SolveOptions()

    if problems:
        raise ConfigError(problems)

    return RunConfig(
        params=params,
        solve=solve,
        model=model,
        source=merged["source"],
        family=merged["family"],
        p1_eval=float(merged["p1_eval"]),
        p2_eval=None if merged["p2_eval"] is None else float(merged["p2_eval"]),
        seed=int(merged["seed"]),
        tol=float(merged["tol"]),
        sweep_f=tuple(float(v) for v in merged["sweep_f"]),
        sweep_k=tuple(float(v) for v in merged["sweep_k"]),
        metadata={k: merged[k] for k in _METADATA_KEYS},
    )
