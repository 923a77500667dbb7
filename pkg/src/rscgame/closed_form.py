"""Transcribed closed-form solutions for all five models.

The published solution formulas are internally inconsistent in places: a
handful of terms break the structural reductions II(f=0) = I, IV(f=0) = III
and V(k=0) = IV that the profit definitions themselves satisfy.  Both
readings are therefore shipped:

  ``literal``     every formula exactly as stated, warts kept.  Used by the
                  proposition checkers, which document the stated claims.
  ``harmonized``  the minimal consistent variant: each inconsistent term is
                  replaced so that the reduction identities hold exactly
                  while every other symbol is preserved.  This is the
                  default solve/sweep family.

:func:`decision_table` evaluates variable-by-variable so a singular
denominator in one formula does not hide the others; :func:`solve_closed_form`
assembles a full Solution and raises on any singularity.

Models I-II have no published price formula; their closed forms are
functions of an evaluation price p1, which must be supplied (the baseline
study's p1 = 1.7 is an evaluation point, not a solved value).
"""

from __future__ import annotations

from .profits import chain_profit, manufacturer_profit, retailer1_profit, \
    retailer2_profit, transfers_at, value_warnings
from .screening import DEFAULT_FEASIBILITY_TOL, screening_check
from .types import (
    COMPETITIVE_MODELS,
    ContractMenu,
    Diagnostics,
    ModelParams,
    PricePair,
    Profits,
    SingularExpressionError,
    Solution,
    validate_model_id,
)

FAMILIES = ("literal", "harmonized")

#: decision variables produced per model
CLOSED_FORM_VARIABLES = {
    "I": ("tau_H", "tau_L", "w_H", "w_L"),
    "II": ("tau_H", "tau_L", "w_H", "w_L"),
    "III": ("w_H", "w_L", "tau_H", "tau_L", "p1", "p2"),
    "IV": ("w_H", "w_L", "tau_H", "tau_L", "p1", "p2"),
    "V": ("w_H", "w_L", "tau_H", "tau_L", "p1", "p2"),
}


def _check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ValueError(f"unknown closed-form family {family!r}; expected one of {FAMILIES}")
    return family


def _div(num: float, den: float, expression: str, context: str) -> float:
    if den == 0.0:
        raise SingularExpressionError(expression, context)
    return num / den


def _centralized_thunks(model_id: str, p: ModelParams, p1: float, family: str):
    """Per-variable formula thunks for the centralized models I-II."""
    g1 = p.p_m + p.c_m - p.c_r - p.c - p.c_d
    d = p.beta_L - p.mu * p.beta_H
    ctx = f"model {model_id} closed form"
    fe = p.f * p.e_m if model_id == "II" else 0.0

    def tau_H():
        return _div(p.mu * (p.a - p1) * g1 - fe, 4.0 * p.beta_H, "4*beta_H", ctx)

    def tau_L():
        return _div((1.0 - p.mu) * (p.a - p1) * g1 - fe, 4.0 * d,
                    "beta_L - mu*beta_H", ctx)

    def w_H():
        ir_term = _div(4.0 * p.pi_R0 * p.beta_H, (p.a - p1) ** 2 * g1,
                       "(a - p1)^2 * margin_gap", ctx)
        if model_id == "II" and family == "literal":
            # as stated, the second term carries an extra additive
            # (beta_L - mu*beta_H) that does not vanish at f = 0
            second = _div((1.0 - p.mu) ** 2 * g1 + (d - fe), 4.0 * d,
                          "beta_L - mu*beta_H", ctx)
        else:
            second = _div((1.0 - p.mu) ** 2 * g1 - fe, 4.0 * d,
                          "beta_L - mu*beta_H", ctx)
        return (p.mu * g1 - fe) / 4.0 + second + ir_term + p.c + p.c_d

    def w_L():
        ir_term = _div(4.0 * p.pi_R0 * p.beta_H * d,
                       (1.0 - p.mu) * (p.a - p1) ** 2 * g1,
                       "(1 - mu)*(a - p1)^2 * margin_gap", ctx)
        return _div((1.0 - p.mu) * g1 - fe, 4.0 * d, "beta_L - mu*beta_H", ctx) \
            + (1.0 - p.mu) ** 2 * g1 / 4.0 + ir_term + p.c + p.c_d

    return {"tau_H": tau_H, "tau_L": tau_L, "w_H": w_H, "w_L": w_L}


def _competitive_values(model_id: str, p: ModelParams, family: str) -> dict[str, float]:
    """Menu and price formulas for the decentralized models III-V."""
    ctx = f"model {model_id} closed form"
    a, eps, c, mu = p.a, p.eps, p.c, p.mu
    bH, bL = p.beta_H, p.beta_L
    pm = p.p_m
    fe_m = p.f * p.e_m if model_id in ("IV", "V") else 0.0
    fe_0 = p.f * p.e_0 if model_id in ("IV", "V") else 0.0
    k = p.k if model_id == "V" else 0.0

    s_sum = pm + p.c_m + p.c_r + p.c_d - c          # full cost stack margin gap
    t_sum = pm + p.c_m + p.c_r - c                  # variant without c_d
    coll = p.c_m + p.c_r + p.c_d - c                # collection-side cost gap

    num_wH = (2.0 * a + 2.0 * c - 2.0 * pm + a * eps - c * eps * pm
              - c * eps ** 2 * pm + eps ** 2 * pm - a * c * eps - 2.0 * a * c)
    num_wL = (2.0 * a * bL - c * eps * pm + eps * bL * pm - c * eps ** 2 * pm
              + eps ** 2 * bL * pm - a * c * eps + a * eps * bL - 2.0 * a * c)
    den_w = (2.0 * bH * (4.0 * bL - c ** 2 - bL ** 2 + bL * mu)
             - 2.0 * bL * mu * (c ** 2 - bH ** 2))

    w_H = _div(bL * (num_wH + fe_m) - fe_0, den_w, "menu denominator", ctx)
    if model_id == "III" and family == "literal":
        # as stated, the first denominator term drops the factor 4
        den_w3 = (2.0 * bH * (bL - c ** 2 - bL ** 2 + bL * mu)
                  - 2.0 * bL * mu * (c ** 2 - bH ** 2))
        w_L = _div(bH * num_wL + 2.0 * bL * (c * pm - bL * pm), den_w3,
                   "menu denominator (literal variant)", ctx)
    else:
        w_L = _div(bH * num_wL + bL * (2.0 * c * pm - 2.0 * bL * pm + fe_m) - fe_0,
                   den_w, "menu denominator", ctx)

    tau_common = 2.0 * a - 2.0 * c + a * eps + c * eps ** 2
    tau_H = _div(p.pi_R0 * mu * (a - eps) * tau_common + bH * fe_m,
                 mu * bH * (eps - 2.0 * mu) ** 2, "mu*beta_H*(eps - 2*mu)^2", ctx)
    tau_L = _div(p.pi_R0 * (1.0 - mu) * tau_common + (bH - bL) * fe_m,
                 mu * (bH - bL) * (eps ** 2 - 4.0 * mu),
                 "mu*(beta_H - beta_L)*(eps^2 - 4*mu)", ctx)
    if model_id == "V":
        tau_H = tau_H + _div((8.0 - eps ** 2) * k, (eps - 2.0 * mu) ** 2,
                             "(eps - 2*mu)^2", ctx)
        if family == "literal":
            # as stated, the correction carries a stray -eps that survives k = 0
            tau_L = tau_L + _div((4.0 - eps ** 2) * k - eps, eps ** 2 - 4.0 * mu,
                                 "eps^2 - 4*mu", ctx)
        else:
            tau_L = tau_L + _div((4.0 - eps ** 2) * k, eps ** 2 - 4.0 * mu,
                                 "eps^2 - 4*mu", ctx)

    if model_id == "III" and family == "literal":
        # the stated model-III price fractions differ structurally from the
        # models IV-V base (no demand-scale factors, opposite sign on the
        # H-branch squared term)
        den_p = 4.0 * bH - s_sum ** 2 + 4.0 * bL - eps ** 2
        p1 = _div(mu * (2.0 + eps) * (2.0 * bH - s_sum ** 2)
                  + (1.0 - mu) * (4.0 + eps) * (2.0 * bL - s_sum ** 2),
                  den_p, "price denominator (literal variant)", ctx)
        p2 = _div(mu * (6.0 + eps) * (4.0 * bH ** 2 - 2.0 * t_sum ** 2)
                  + (1.0 - mu) * (8.0 + 2.0 * eps) * (4.0 * bL ** 2 - 2.0 * t_sum ** 2),
                  den_p, "price denominator (literal variant)", ctx)
    else:
        den_p = 4.0 * bH - (a - eps) * s_sum ** 2 + 4.0 * bL - eps ** 2
        p1 = _div(mu * (2.0 + eps) * (a - eps) * (2.0 * bH + s_sum ** 2)
                  + (a + eps) * (1.0 - mu) * (4.0 + eps) * (2.0 * bL - s_sum ** 2),
                  den_p, "price denominator", ctx)
        p2 = _div(mu * (a - eps) * (6.0 + eps) * (4.0 * bH ** 2 - 2.0 * t_sum ** 2)
                  + (a + eps) * (1.0 - mu) * (8.0 + 2.0 * eps) * (4.0 * bL ** 2 - 2.0 * t_sum ** 2),
                  den_p, "price denominator", ctx)

    if model_id in ("IV", "V"):
        p1 = p1 + _div(fe_m, 4.0 * bH + (a - eps) * s_sum ** 2,
                       "4*beta_H + (a - eps)*margin_gap^2", ctx) + fe_0
        p2 = p2 + _div(fe_m, (a - eps) * s_sum ** 2, "(a - eps)*margin_gap^2", ctx) \
            + _div(fe_0, bH * (a - eps), "beta_H*(a - eps)", ctx)

    if model_id == "V":
        den_wk_H = 2.0 * bH * (4.0 * bL - c ** 2 - bL ** 2) - 2.0 * c ** 2 * bL * mu
        w_H = w_H + _div(k * (2.0 + eps ** 2 - mu ** 2), den_wk_H,
                         "recycling-strength menu denominator", ctx)
        den_wk_L = 2.0 * bH * (4.0 * bL - c ** 2 - bL ** 2 + bL * mu)
        w_L = w_L + _div(k * (2.0 - eps ** 2 - 2.0 * mu ** 2), den_wk_L,
                         "recycling-strength menu denominator", ctx)
        if family == "literal":
            # as stated, the price corrections replace (rather than extend)
            # the model-IV emission terms and do not vanish at k = 0
            p1 = p1 - fe_0 + _div(2.0 * fe_0 - coll * k, s_sum ** 2,
                                  "margin_gap^2", ctx)
            p2 = p2 - _div(fe_0, bH * (a - eps), "beta_H*(a - eps)", ctx) \
                + _div(3.0 * fe_0 - coll * (k - eps), s_sum ** 2, "margin_gap^2", ctx)
        else:
            p1 = p1 - _div(coll * k, s_sum ** 2, "margin_gap^2", ctx)
            p2 = p2 - _div(coll * k, s_sum ** 2, "margin_gap^2", ctx)

    return {"w_H": w_H, "w_L": w_L, "tau_H": tau_H, "tau_L": tau_L, "p1": p1, "p2": p2}


def decision_values(model_id: str, params: ModelParams,
                    prices: PricePair | None = None,
                    family: str = "harmonized") -> dict[str, float]:
    """Closed-form decision variables for one model.

    Args:
        model_id: one of I..V.
        params: model parameters.
        prices: evaluation prices; required for models I-II (whose formulas
            contain p1), ignored for III-V.
        family: "literal" or "harmonized".

    Raises:
        SingularExpressionError: when a denominator is exactly zero.
    """
    validate_model_id(model_id)
    _check_family(family)
    if model_id in COMPETITIVE_MODELS:
        return _competitive_values(model_id, params, family)
    if prices is None:
        raise ValueError(f"model {model_id} closed forms need an evaluation price p1")
    return _centralized_values(model_id, params, prices.p1, family)


def decision_table(model_id: str, params: ModelParams,
                   prices: PricePair | None = None,
                   family: str = "harmonized") -> dict[str, float | str]:
    """Per-variable evaluation with singularities reported as status strings.

    Unlike :func:`decision_values` this never raises on a zero denominator;
    the affected entries carry ``"singular: <expression>"`` instead, which is
    what the cross-check report tabulates.
    """
    validate_model_id(model_id)
    _check_family(family)
    out: dict[str, float | str] = {}
    for var in CLOSED_FORM_VARIABLES[model_id]:
        try:
            out[var] = decision_values(model_id, params, prices, family)[var]
        except SingularExpressionError as err:
            out[var] = f"singular: {err.expression}"
    return out


def solve_closed_form(model_id: str, params: ModelParams,
                      prices: PricePair | None = None,
                      family: str = "harmonized",
                      tol: float = DEFAULT_FEASIBILITY_TOL,
                      transfer_on_deviation: str = "chosen_item") -> Solution:
    """Assemble a full Solution from the closed-form formulas.

    For models I-II the solution is evaluated at the supplied p1 (there is
    no published price formula); the note in the diagnostics records this.
    """
    values = decision_values(model_id, params, prices, family)
    menu = ContractMenu(w_H=values["w_H"], w_L=values["w_L"],
                        tau_H=values["tau_H"], tau_L=values["tau_L"])
    notes: tuple[str, ...] = (f"closed-form family: {family}",)
    if model_id in COMPETITIVE_MODELS:
        sol_prices = PricePair(p1=values["p1"], p2=values["p2"])
    else:
        assert prices is not None
        sol_prices = PricePair(p1=prices.p1, p2=None)
        notes = notes + ("p1 is an evaluation input, not a solved value",)

    report = screening_check(menu, params, sol_prices, model_id, tol=tol,
                             transfer_on_deviation=transfer_on_deviation)
    warnings = value_warnings(model_id, params, menu, sol_prices)
    profits = Profits(
        manufacturer=manufacturer_profit(model_id, params, menu, sol_prices),
        retailer1=retailer1_profit(model_id, params, menu, sol_prices),
        retailer2=(retailer2_profit(model_id, params, sol_prices)
                   if model_id in COMPETITIVE_MODELS else None),
        chain=chain_profit(model_id, params, menu, sol_prices),
    )
    diag = Diagnostics(feasible=report.feasible, in_range=not warnings,
                       warnings=warnings, notes=notes)
    return Solution(model_id=model_id, menu=menu, prices=sol_prices,
                    profits=profits, transfers=transfers_at(model_id, params, menu, sol_prices),
                    slacks=report, diagnostics=diag, provenance="closed_form")
