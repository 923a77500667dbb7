"""Core value types for the reverse-supply-chain game models.

Five model variants are supported, identified by roman numerals:

  I    centralized chain, no government transfers
  II   centralized chain with the carbon emission transfer
  III  decentralized duopoly retail, no transfers
  IV   decentralized duopoly retail with the carbon emission transfer
  V    model IV plus the recycling-rate reward/penalty for the retailers

All types are immutable values and all operations on them are pure
functions, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

MODELS = ("I", "II", "III", "IV", "V")

#: models where two retailers compete on price (p2 exists)
COMPETITIVE_MODELS = frozenset({"III", "IV", "V"})

#: models that include the emission transfer -f*(quantity*e_m - e_0)
CARBON_MODELS = frozenset({"II", "IV", "V"})

#: models that include the recycling-rate transfer k*(tau - tau_0)
RECYCLING_RP_MODELS = frozenset({"V"})


class ModelStructureError(ValueError):
    """Inputs structurally inconsistent with the requested model (e.g. a
    missing second retail price for a competitive model)."""


class SingularExpressionError(ZeroDivisionError):
    """A closed-form denominator evaluated to exactly zero.

    ``expression`` names the offending sub-expression so callers can report
    which printed formula failed rather than a bare division error.
    """

    def __init__(self, expression: str, context: str = ""):
        self.expression = expression
        self.context = context
        msg = f"singular parameter set: {expression} = 0"
        if context:
            msg += f" in {context}"
        super().__init__(msg)


class InfeasibleMenuError(RuntimeError):
    """The solver found no screening-feasible decision.

    Carries the least-violated candidate so reports can name the most
    binding constraint.
    """

    def __init__(self, model_id: str, constraint: str, violation: float):
        self.model_id = model_id
        self.constraint = constraint
        self.violation = violation
        super().__init__(
            f"model {model_id}: no feasible menu; most violated constraint "
            f"is {constraint} (violation {violation:.6g})"
        )


class DivergenceError(RuntimeError):
    """Best-response iteration failed to reach its tolerance."""

    def __init__(self, message: str, trace: tuple[float, ...] = ()):
        self.trace = trace
        super().__init__(message)


def validate_model_id(model_id: str) -> str:
    if model_id not in MODELS:
        raise ModelStructureError(f"unknown model id {model_id!r}; expected one of {MODELS}")
    return model_id


@dataclass(frozen=True)
class ModelParams:
    """Exogenous scalars shared by all five models.

    Attributes:
        a: potential market demand per retailer.
        eps: price substitution coefficient between the retailers, in (0, 1).
        c: retailer 1's unit collection cost (enters the (w - c) margin).
        c_d: manufacturer unit testing/sorting cost.
        c_r: manufacturer unit remanufacturing cost.
        c_m: manufacturer unit cost of new production.
        p_m: manufacturer transfer (wholesale) price to the retailers.
        mu: probability weight applied to the high-difficulty branch of every
            expected-profit expression (see ``mu_weights_l_branch``).
        beta_H: recycling-difficulty coefficient of the H type (> beta_L).
        beta_L: recycling-difficulty coefficient of the L type.
        pi_R0: retailer 1's reservation profit.
        f: unit strength of the emission reward/penalty.
        k: unit strength of the recycling-rate reward/penalty.
        e_m: manufacturer unit carbon emission.
        e_0: emission cap.
        tau_0: government target recycling rate, in [0, 1].
        mu_weights_l_branch: when True, ``mu`` weights the L branch instead
            of the H branch in expected values (alternative reading switch;
            closed forms always substitute ``mu`` as written).
    """

    a: float
    eps: float
    c: float
    c_d: float
    c_r: float
    c_m: float
    p_m: float
    mu: float
    beta_H: float
    beta_L: float
    pi_R0: float
    f: float
    k: float
    e_m: float
    e_0: float
    tau_0: float
    mu_weights_l_branch: bool = False

    def violations(self) -> list[str]:
        """Return every violated invariant (empty when valid)."""
        bad = []
        if not (0.0 < self.eps < 1.0):
            bad.append(f"eps must satisfy 0 < eps < 1 (got {self.eps})")
        if not (0.0 <= self.mu <= 1.0):
            bad.append(f"mu must lie in [0, 1] (got {self.mu})")
        if not (0.0 <= self.tau_0 <= 1.0):
            bad.append(f"tau_0 must lie in [0, 1] (got {self.tau_0})")
        if not (self.beta_H > self.beta_L > 0.0):
            bad.append(
                f"difficulty coefficients must satisfy beta_H > beta_L > 0 "
                f"(got beta_H={self.beta_H}, beta_L={self.beta_L})"
            )
        if not self.a > 0.0:
            bad.append(f"a must be positive (got {self.a})")
        for name in ("c", "c_d", "c_r", "c_m", "p_m", "f", "k", "e_m", "e_0"):
            if getattr(self, name) < 0.0:
                bad.append(f"{name} must be nonnegative (got {getattr(self, name)})")
        return bad

    def validate(self) -> "ModelParams":
        bad = self.violations()
        if bad:
            raise ValueError("invalid parameters: " + "; ".join(bad))
        return self

    @property
    def weight_H(self) -> float:
        """Expected-value weight on the H branch."""
        return (1.0 - self.mu) if self.mu_weights_l_branch else self.mu

    @property
    def weight_L(self) -> float:
        return 1.0 - self.weight_H

    def with_(self, **changes) -> "ModelParams":
        """Copy with the given fields replaced."""
        return replace(self, **changes)


def section6_params(**overrides) -> ModelParams:
    """The numerical-study baseline parameter set.

    ``mu`` and ``pi_R0`` are not part of the published set; the defaults
    used here (0.5 and 0) are recorded in every report header.
    """
    base = dict(
        a=3.0, eps=0.4, c=4.0, c_d=3.0, c_r=2.6, c_m=2.0, p_m=1.3,
        mu=0.5, beta_H=0.7, beta_L=0.5, pi_R0=0.0,
        f=3.0, k=2.0, e_m=0.9, e_0=1.3, tau_0=0.8,
    )
    base.update(overrides)
    return ModelParams(**base)


@dataclass(frozen=True)
class TypeProfile:
    """One retailer-1 type: its label, difficulty coefficient and weight."""

    label: str  # "H" or "L"
    beta: float
    weight: float


def type_profiles(params: ModelParams) -> tuple[TypeProfile, TypeProfile]:
    """The (H, L) profiles; weights sum to 1 by construction."""
    return (
        TypeProfile("H", params.beta_H, params.weight_H),
        TypeProfile("L", params.beta_L, params.weight_L),
    )


@dataclass(frozen=True)
class ContractMenu:
    """Screening menu {(w_H, tau_H), (w_L, tau_L)} offered by the manufacturer."""

    w_H: float
    w_L: float
    tau_H: float
    tau_L: float

    def item(self, label: str) -> tuple[float, float]:
        """(w, tau) of the named item."""
        if label == "H":
            return self.w_H, self.tau_H
        if label == "L":
            return self.w_L, self.tau_L
        raise ValueError(f"unknown menu item {label!r}")


@dataclass(frozen=True)
class PricePair:
    """Retail prices; ``p2`` is None for the single-retailer models I-II."""

    p1: float
    p2: float | None = None


@dataclass(frozen=True)
class Profits:
    manufacturer: float
    retailer1: float
    retailer2: float | None
    chain: float


@dataclass(frozen=True)
class Transfers:
    """Government transfers at a decision point (zero when a mechanism is off)."""

    emission: float
    recycling_H: float
    recycling_L: float
    retailer2_penalty: float


@dataclass(frozen=True)
class ScreeningReport:
    """Slacks of the four screening constraints (satisfied iff slack >= -tol).

    ``binding`` lists the constraints that hold with equality within ``tol``.
    """

    ir_L: float
    ir_H: float
    ic_H: float
    ic_L: float
    tol: float
    binding: tuple[str, ...]
    feasible: bool

    def slack(self, name: str) -> float:
        return {"ir_L": self.ir_L, "ir_H": self.ir_H, "ic_H": self.ic_H, "ic_L": self.ic_L}[name]

    def as_dict(self) -> dict[str, float]:
        return {"ir_L": self.ir_L, "ir_H": self.ir_H, "ic_H": self.ic_H, "ic_L": self.ic_L}

    def most_violated(self) -> tuple[str, float]:
        name = min(self.as_dict(), key=lambda n: self.slack(n))
        return name, self.slack(name)


@dataclass(frozen=True)
class Diagnostics:
    """Evaluation health flags attached to a Solution.

    ``warnings`` collects raw-value issues (negative demand, tau outside
    [0, 1], negative margins); values are never clamped, only flagged.
    ``in_range`` is True when no range warning fired.  ``stationarity`` maps
    stage names to scaled projected-gradient residuals when the numeric
    solver produced the solution.
    """

    feasible: bool
    in_range: bool
    warnings: tuple[str, ...] = ()
    stationarity: Mapping[str, float] | None = None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Solution:
    """Full equilibrium record for one model and one solution source."""

    model_id: str
    menu: ContractMenu
    prices: PricePair
    profits: Profits
    transfers: Transfers
    slacks: ScreeningReport
    diagnostics: Diagnostics
    provenance: str  # "closed_form" or "oracle"

    def decision_values(self) -> dict[str, float | None]:
        return {
            "w_H": self.menu.w_H,
            "w_L": self.menu.w_L,
            "tau_H": self.menu.tau_H,
            "tau_L": self.menu.tau_L,
            "p1": self.prices.p1,
            "p2": self.prices.p2,
        }

    def flat(self) -> dict[str, object]:
        """Flatten to the canonical CSV column map."""
        return {
            "model_id": self.model_id,
            "provenance": self.provenance,
            "w_H": self.menu.w_H,
            "w_L": self.menu.w_L,
            "tau_H": self.menu.tau_H,
            "tau_L": self.menu.tau_L,
            "p1": self.prices.p1,
            "p2": self.prices.p2,
            "profit_manufacturer": self.profits.manufacturer,
            "profit_retailer1": self.profits.retailer1,
            "profit_retailer2": self.profits.retailer2,
            "profit_chain": self.profits.chain,
            "transfer_emission": self.transfers.emission,
            "transfer_recycling_H": self.transfers.recycling_H,
            "transfer_recycling_L": self.transfers.recycling_L,
            "transfer_retailer2_penalty": self.transfers.retailer2_penalty,
            "slack_ir_L": self.slacks.ir_L,
            "slack_ir_H": self.slacks.ir_H,
            "slack_ic_H": self.slacks.ic_H,
            "slack_ic_L": self.slacks.ic_L,
            "feasible": self.diagnostics.feasible,
            "in_range": self.diagnostics.in_range,
            "warnings": "|".join(self.diagnostics.warnings),
        }


SOLUTION_CSV_COLUMNS = (
    "model_id", "provenance", "w_H", "w_L", "tau_H", "tau_L", "p1", "p2",
    "profit_manufacturer", "profit_retailer1", "profit_retailer2", "profit_chain",
    "transfer_emission", "transfer_recycling_H", "transfer_recycling_L",
    "transfer_retailer2_penalty",
    "slack_ir_L", "slack_ir_H", "slack_ic_H", "slack_ic_L",
    "feasible", "in_range", "warnings",
)
