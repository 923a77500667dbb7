"""Executable checks of the eight comparative-statics claims.

Each proposition compares two models and asserts the sign of a decision
difference under stated parameter conditions.  The checker evaluates every
stated condition as a named, individually-reported comparison (exactly as
stated, including the noisy ones) and the stated conclusion(s) from the
chosen solution source, then classifies:

  holds     at least one branch's conditions all pass and every conclusion
            of every passing branch is true;
  fails     some passing branch has a false conclusion;
  vacuous   no branch's conditions pass;
  singular  the required values could not be evaluated (zero denominator,
            or an infeasible/non-convergent numeric solve).

Closed-form conclusions default to the ``literal`` transcription family:
the checks document the claims as stated rather than the repaired variant.
Closed-form and oracle verdicts are never merged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .closed_form import decision_table
from .oracle import SolveOptions, solve_oracle
from .types import (
    DivergenceError,
    InfeasibleMenuError,
    ModelParams,
    PricePair,
    SingularExpressionError,
    Solution,
)

PROPOSITION_MODELS = {
    1: ("II", "I"), 2: ("II", "I"),
    3: ("IV", "III"), 4: ("IV", "III"), 5: ("IV", "III"),
    6: ("V", "IV"), 7: ("V", "IV"), 8: ("V", "IV"),
}


@dataclass(frozen=True)
class Condition:
    name: str
    value: float
    relation: str  # "<" or ">"
    threshold: float
    passed: bool


@dataclass(frozen=True)
class Conclusion:
    name: str
    value: float
    relation: str
    threshold: float
    passed: bool


@dataclass(frozen=True)
class Branch:
    name: str
    conditions: tuple[Condition, ...]
    conclusions: tuple[Conclusion, ...]
    active: bool


@dataclass(frozen=True)
class PropositionReport:
    number: int
    source: str
    family: str
    branches: tuple[Branch, ...]
    verdict: str  # holds | fails | vacuous | singular
    error: str = ""

    def condition(self, name: str) -> Condition:
        for b in self.branches:
            for c in b.conditions:
                if c.name == name:
                    return c
        raise KeyError(name)


def _cmp(value: float, relation: str, threshold: float) -> bool:
    if relation == "<":
        return value < threshold
    if relation == ">":
        return value > threshold
    raise ValueError(f"unknown relation {relation!r}")


def _cond(name, value, relation, threshold) -> Condition:
    return Condition(name, float(value), relation, float(threshold),
                     _cmp(value, relation, threshold))


def _concl(name, value, relation, threshold=0.0) -> Conclusion:
    return Conclusion(name, float(value), relation, float(threshold),
                      _cmp(value, relation, threshold))


def _branch(name, conditions, conclusions) -> Branch:
    return Branch(name, tuple(conditions), tuple(conclusions),
                  active=all(c.passed for c in conditions))


class _SingularValues(Exception):
    pass


def _decisions(model_id: str, params: ModelParams, source: str,
               prices: PricePair | None, opts: SolveOptions | None,
               family: str, solutions: dict[str, Solution] | None) -> dict[str, float]:
    if source == "oracle":
        sol = solutions.get(model_id) if solutions else None
        if sol is None:
            sol = solve_oracle(model_id, params, opts)
        return {k: v for k, v in sol.decision_values().items() if v is not None}
    table = decision_table(model_id, params, prices, family)
    out: dict[str, float] = {}
    for name, value in table.items():
        if isinstance(value, str):
            raise _SingularValues(f"model {model_id} {name}: {value}")
        out[name] = value
    return out


def _build_branches(n: int, p: ModelParams, hi: dict[str, float],
                    lo: dict[str, float]) -> list[Branch]:
    """Branches for proposition ``n``; ``hi``/``lo`` are the decision values
    of the higher-numbered and lower-numbered model of the pair."""
    fe_m = p.f * p.e_m
    d_screen = p.beta_L - p.mu * p.beta_H

    def diff(var: str) -> float:
        return hi[var] - lo[var]

    if n == 1:
        if 1.0 + d_screen == 0.0:
            raise _SingularValues("threshold denominator 1 + beta_L - mu*beta_H = 0")
        thr = d_screen / (1.0 + d_screen)
        return [
            _branch("buy_back_H_weak_emission_charge",
                    [_cond("f*e_m below screening threshold", fe_m, "<", thr)],
                    [_concl("w_H difference", diff("w_H"), ">")]),
            _branch("buy_back_H_strong_emission_charge",
                    [_cond("f*e_m above screening threshold", fe_m, ">", thr)],
                    [_concl("w_H difference", diff("w_H"), "<")]),
            _branch("buy_back_L",
                    [_cond("beta_L - mu*beta_H positive", d_screen, ">", 0.0)],
                    [_concl("w_L difference", diff("w_L"), "<")]),
        ]

    if n == 2:
        return [
            _branch("recycling_H",
                    [_cond("beta_H positive", p.beta_H, ">", 0.0),
                     _cond("f*e_m positive", fe_m, ">", 0.0)],
                    [_concl("tau_H difference", diff("tau_H"), "<")]),
            _branch("recycling_L",
                    [_cond("f*e_m positive", fe_m, ">", 0.0),
                     _cond("beta_L - mu*beta_H positive", d_screen, ">", 0.0)],
                    [_concl("tau_L difference", diff("tau_L"), "<")]),
        ]

    if n == 3:
        if p.beta_L == 0.0:
            raise _SingularValues("emission-cap threshold denominator beta_L = 0")
        cap_ratio = p.e_0 / p.beta_L
        lhs2 = p.beta_H * (4.0 * p.beta_L - p.c ** 2 - p.beta_L ** 2 + p.mu * p.beta_L)
        rhs2 = p.beta_L * (p.mu * p.c ** 2 - p.mu * p.beta_H ** 2)
        shared = _cond("menu denominator condition", lhs2, "<", rhs2)
        return [
            _branch("buy_back_H_low_emission",
                    [_cond("e_m below e_0/beta_L", p.e_m, "<", cap_ratio), shared],
                    [_concl("w_H difference", diff("w_H"), ">")]),
            _branch("buy_back_H_high_emission",
                    [_cond("e_m above e_0/beta_L", p.e_m, ">", cap_ratio), shared],
                    [_concl("w_H difference", diff("w_H"), "<")]),
        ]

    if n == 4:
        return [
            _branch("recycling_H",
                    [_cond("beta_H*f*e_m positive", p.beta_H * fe_m, ">", 0.0),
                     _cond("mu positive", p.mu, ">", 0.0),
                     _cond("beta_H positive", p.beta_H, ">", 0.0),
                     _cond("(eps - 2*mu)^2 positive", (p.eps - 2.0 * p.mu) ** 2, ">", 0.0)],
                    [_concl("tau_H difference", diff("tau_H"), ">")]),
            _branch("recycling_L_high_substitution",
                    [_cond("beta_H above beta_L", p.beta_H, ">", p.beta_L),
                     _cond("mu positive", p.mu, ">", 0.0),
                     _cond("eps^2 - 4*mu positive", p.eps ** 2 - 4.0 * p.mu, ">", 0.0)],
                    [_concl("tau_L difference", diff("tau_L"), ">")]),
            _branch("recycling_L_low_substitution",
                    [_cond("beta_H above beta_L", p.beta_H, ">", p.beta_L),
                     _cond("mu positive", p.mu, ">", 0.0),
                     _cond("eps^2 - 4*mu negative", p.eps ** 2 - 4.0 * p.mu, "<", 0.0)],
                    [_concl("tau_L difference", diff("tau_L"), "<")]),
        ]

    if n == 5:
        s_sum = p.p_m + p.c_m + p.c_r + p.c_d - p.c
        return [
            _branch("retail_prices",
                    [_cond("f*e_m positive", fe_m, ">", 0.0),
                     _cond("f*e_0 positive", p.f * p.e_0, ">", 0.0),
                     _cond("a - eps positive", p.a - p.eps, ">", 0.0),
                     _cond("margin gap squared positive", s_sum ** 2, ">", 0.0)],
                    [_concl("p1 difference", diff("p1"), ">"),
                     _concl("p2 difference", diff("p2"), ">")]),
        ]

    if n == 6:
        core = 4.0 * p.beta_L - p.c ** 2 - p.beta_L ** 2
        return [
            _branch("buy_back_H",
                    [_cond("menu core positive", core, ">", 0.0),
                     _cond("menu core above c^2*mu", core, ">", p.c ** 2 * p.mu)],
                    [_concl("w_H difference", diff("w_H"), ">")]),
            _branch("buy_back_L",
                    [_cond("2 - eps^2 - 2*mu^2 positive",
                           2.0 - p.eps ** 2 - 2.0 * p.mu ** 2, ">", 0.0),
                     _cond("menu core plus beta_L*mu positive",
                           core + p.beta_L * p.mu, ">", 0.0)],
                    [_concl("w_L difference", diff("w_L"), ">")]),
        ]

    if n == 7:
        k_thr = p.eps ** 2 / (4.0 - p.eps ** 2)
        return [
            _branch("recycling_H",
                    [_cond("8 - eps^2 positive", 8.0 - p.eps ** 2, ">", 0.0),
                     _cond("k positive", p.k, ">", 0.0),
                     _cond("(eps - 2*mu)^2 positive", (p.eps - 2.0 * p.mu) ** 2, ">", 0.0)],
                    [_concl("tau_H difference", diff("tau_H"), ">")]),
            _branch("recycling_L_strong_strength",
                    [_cond("eps^2 - 4*mu positive", p.eps ** 2 - 4.0 * p.mu, ">", 0.0),
                     _cond("k above eps^2/(4 - eps^2)", p.k, ">", k_thr)],
                    [_concl("tau_L difference", diff("tau_L"), ">")]),
            _branch("recycling_L_weak_strength",
                    [_cond("eps^2 - 4*mu positive", p.eps ** 2 - 4.0 * p.mu, ">", 0.0),
                     _cond("k below eps^2/(4 - eps^2)", p.k, "<", k_thr)],
                    [_concl("tau_L difference", diff("tau_L"), "<")]),
        ]

    if n == 8:
        s_sum = p.p_m + p.c_m + p.c_r + p.c_d - p.c
        coll = p.c_m + p.c_r + p.c_d - p.c
        if coll == 0.0 or p.beta_H * (p.a - p.eps) == 0.0:
            raise _SingularValues("strength threshold denominator = 0")
        thr1 = (2.0 - s_sum ** 2) * p.f * p.e_0 / coll
        thr2 = (3.0 * p.f * p.e_0 / coll
                - p.f * p.e_0 * s_sum ** 2 / (p.beta_H * (p.a - p.eps) * coll)
                + p.eps)
        return [
            _branch("retail_price_1_weak_strength",
                    [_cond("k below p1 threshold", p.k, "<", thr1)],
                    [_concl("p1 difference", diff("p1"), ">")]),
            _branch("retail_price_1_strong_strength",
                    [_cond("k above p1 threshold", p.k, ">", thr1)],
                    [_concl("p1 difference", diff("p1"), "<")]),
            _branch("retail_price_2_weak_strength",
                    [_cond("k below p2 threshold", p.k, "<", thr2)],
                    [_concl("p2 difference", diff("p2"), ">")]),
            _branch("retail_price_2_strong_strength",
                    [_cond("k above p2 threshold", p.k, ">", thr2)],
                    [_concl("p2 difference", diff("p2"), "<")]),
        ]

    raise ValueError(f"proposition number must be 1..8, got {n}")


def check_proposition(n: int, params: ModelParams, source: str = "closed_form",
                      prices: PricePair | None = None,
                      opts: SolveOptions | None = None,
                      family: str = "literal",
                      solutions: dict[str, Solution] | None = None) -> PropositionReport:
    """Evaluate proposition ``n`` (1..8) from the chosen solution source.

    ``prices`` supplies the evaluation price for the centralized closed
    forms (propositions 1-2 with the closed-form source).  ``solutions``
    optionally caches oracle Solutions keyed by model id.
    """
    if n not in PROPOSITION_MODELS:
        raise ValueError(f"proposition number must be 1..8, got {n}")
    if source not in ("closed_form", "oracle"):
        raise ValueError(f"unknown source {source!r}")
    model_hi, model_lo = PROPOSITION_MODELS[n]
    try:
        hi = _decisions(model_hi, params, source, prices, opts, family, solutions)
        lo = _decisions(model_lo, params, source, prices, opts, family, solutions)
        branches = tuple(_build_branches(n, params, hi, lo))
    except (_SingularValues, SingularExpressionError,
            InfeasibleMenuError, DivergenceError) as err:
        return PropositionReport(number=n, source=source, family=family,
                                 branches=(), verdict="singular", error=str(err))

    active = [b for b in branches if b.active]
    if not active:
        verdict = "vacuous"
    elif all(c.passed for b in active for c in b.conclusions):
        verdict = "holds"
    else:
        verdict = "fails"
    return PropositionReport(number=n, source=source, family=family,
                             branches=branches, verdict=verdict)


def check_all_propositions(params: ModelParams, source: str = "closed_form",
                           prices: PricePair | None = None,
                           opts: SolveOptions | None = None,
                           family: str = "literal") -> list[PropositionReport]:
    """All eight reports from one source, reusing oracle solves across them."""
    solutions: dict[str, Solution] = {}
    if source == "oracle":
        for model_id in ("I", "II", "III", "IV", "V"):
            try:
                solutions[model_id] = solve_oracle(model_id, params, opts)
            except (InfeasibleMenuError, DivergenceError):
                pass  # the affected propositions report singular
    return [check_proposition(n, params, source, prices, opts, family, solutions)
            for n in range(1, 9)]
