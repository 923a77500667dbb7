"""Demand, transfer and profit evaluators for models I-V.

Every function here is a pure formula: same inputs give bitwise-identical
outputs, nothing is clamped, and out-of-range inputs (negative demand,
recycling rates outside [0, 1], negative margins) are evaluated as-is.
Range problems are surfaced separately by :func:`value_warnings` so that a
transcribed closed form can be inspected rather than silently repaired.

All evaluators are written with plain arithmetic so they accept numpy
arrays anywhere a float is accepted and broadcast elementwise; the solver
relies on this for its vectorized grid scans.
"""

from __future__ import annotations

from .types import (
    CARBON_MODELS,
    COMPETITIVE_MODELS,
    RECYCLING_RP_MODELS,
    ContractMenu,
    ModelParams,
    ModelStructureError,
    PricePair,
    validate_model_id,
)


def demand(params: ModelParams, prices: PricePair, model_id: str):
    """Market demands (q1, q2, Q) for the given retail prices.

    Models I-II serve a single retailer: q1 = a - p1, q2 = 0.  The
    competitive models III-V use the substitutable pair
    q1 = a - p1 + eps*p2 and q2 = a - p2 + eps*p1.

    Raises:
        ModelStructureError: if ``prices.p2`` is present for models I-II or
            missing for models III-V.
    """
    validate_model_id(model_id)
    if model_id in COMPETITIVE_MODELS:
        if prices.p2 is None:
            raise ModelStructureError(f"model {model_id} needs a second retail price p2")
        q1 = params.a - prices.p1 + params.eps * prices.p2
        q2 = params.a - prices.p2 + params.eps * prices.p1
        return q1, q2, q1 + q2
    if prices.p2 is not None:
        raise ModelStructureError(f"model {model_id} has one retailer; p2 must be absent")
    q1 = params.a - prices.p1
    return q1, 0.0 * q1, q1


def emission_transfer(params: ModelParams, quantity):
    """Government emission transfer -f*(quantity*e_m - e_0).

    Positive below the cap (reward), negative above it (penalty).  Model II
    applies it to q1; models IV-V to total demand Q.
    """
    return -params.f * (quantity * params.e_m - params.e_0)


def recycling_transfer(params: ModelParams, tau):
    """Retailer 1's recycling transfer k*(tau - tau_0) (model V only)."""
    return params.k * (tau - params.tau_0)


def retailer2_penalty(params: ModelParams):
    """Retailer 2's unconditional recycling penalty -k*tau_0 (model V only)."""
    return -params.k * params.tau_0


def _unit_margin(params: ModelParams, tau, w, model_id: str):
    """Manufacturer's per-unit margin for one type branch."""
    m = params.p_m - tau * (w + params.c_d + params.c_r) - (1.0 - tau) * params.c_m
    if model_id in CARBON_MODELS:
        m = m - params.f * params.e_m
    return m


def _quantity(params: ModelParams, prices: PricePair, model_id: str):
    """Quantity entering the manufacturer's profit: q1 for I-II, Q for III-V."""
    q1, _, total = demand(params, prices, model_id)
    return total if model_id in COMPETITIVE_MODELS else q1


def manufacturer_profit(model_id: str, params: ModelParams, menu: ContractMenu,
                        prices: PricePair):
    """Expected manufacturer profit.

    Each type branch is quantity * (p_m - tau*(w + c_d + c_r) - (1-tau)*c_m),
    with the per-unit emission charge f*e_m and the cap rebate f*e_0 added in
    the carbon models.
    """
    q = _quantity(params, prices, model_id)
    rebate = params.f * params.e_0 if model_id in CARBON_MODELS else 0.0
    branch_H = q * _unit_margin(params, menu.tau_H, menu.w_H, model_id) + rebate
    branch_L = q * _unit_margin(params, menu.tau_L, menu.w_L, model_id) + rebate
    return params.weight_H * branch_H + params.weight_L * branch_L


def _retailer1_branch(params: ModelParams, q1, p1, tau, w, beta, model_id: str):
    val = q1 * tau * (w - params.c) + q1 * (p1 - params.p_m) - beta * tau * tau
    if model_id in RECYCLING_RP_MODELS:
        val = val + recycling_transfer(params, tau)
    return val


def retailer1_profit(model_id: str, params: ModelParams, menu: ContractMenu,
                     prices: PricePair):
    """Expected profit of the recycling retailer.

    Per branch: q1*tau*(w - c) + q1*(p1 - p_m) - beta*tau^2, plus the
    recycling transfer k*(tau - tau_0) inside each branch in model V.  The
    quadratic term is the fixed collection-network cost.
    """
    q1, _, _ = demand(params, prices, model_id)
    branch_H = _retailer1_branch(params, q1, prices.p1, menu.tau_H, menu.w_H,
                                 params.beta_H, model_id)
    branch_L = _retailer1_branch(params, q1, prices.p1, menu.tau_L, menu.w_L,
                                 params.beta_L, model_id)
    return params.weight_H * branch_H + params.weight_L * branch_L


def retailer2_profit(model_id: str, params: ModelParams, prices: PricePair):
    """Profit of the non-recycling retailer (models III-V only)."""
    if model_id not in COMPETITIVE_MODELS:
        raise ModelStructureError(f"model {model_id} has no second retailer")
    _, q2, _ = demand(params, prices, model_id)
    val = (prices.p2 - params.p_m) * q2
    if model_id in RECYCLING_RP_MODELS:
        val = val + retailer2_penalty(params)
    return val


def chain_profit(model_id: str, params: ModelParams, menu: ContractMenu,
                 prices: PricePair):
    """Total chain profit: the sum of all member profits.

    For models I-II this equals the direct centralized expression in which
    the buy-back price cancels; see :func:`chain_profit_direct`.
    """
    total = manufacturer_profit(model_id, params, menu, prices)
    total = total + retailer1_profit(model_id, params, menu, prices)
    if model_id in COMPETITIVE_MODELS:
        total = total + retailer2_profit(model_id, params, prices)
    return total


def chain_profit_direct(model_id: str, params: ModelParams, menu: ContractMenu,
                        prices: PricePair):
    """Centralized chain profit for models I-II written without w.

    Per branch: (a - p1)*(p1 - tau*(c_d + c_r - c_m + c) - c_m) - beta*tau^2,
    with the emission terms added in model II.  Used as an independent check
    that the buy-back price cancels out of the member sum.
    """
    if model_id in COMPETITIVE_MODELS:
        raise ModelStructureError("direct chain form exists only for models I-II")
    q1, _, _ = demand(params, prices, model_id)
    g = params.c_d + params.c_r - params.c_m + params.c
    extra = params.f * params.e_m if model_id in CARBON_MODELS else 0.0
    rebate = params.f * params.e_0 if model_id in CARBON_MODELS else 0.0
    branch_H = (q1 * (prices.p1 - menu.tau_H * g - params.c_m - extra) + rebate
                - params.beta_H * menu.tau_H ** 2)
    branch_L = (q1 * (prices.p1 - menu.tau_L * g - params.c_m - extra) + rebate
                - params.beta_L * menu.tau_L ** 2)
    return params.weight_H * branch_H + params.weight_L * branch_L


def transfers_at(model_id: str, params: ModelParams, menu: ContractMenu,
                 prices: PricePair):
    """All government transfers at a decision point (as a Transfers record)."""
    from .types import Transfers

    if model_id in CARBON_MODELS:
        base = _quantity(params, prices, model_id)
        emission = emission_transfer(params, base)
    else:
        emission = 0.0
    if model_id in RECYCLING_RP_MODELS:
        rec_H = recycling_transfer(params, menu.tau_H)
        rec_L = recycling_transfer(params, menu.tau_L)
        pen2 = retailer2_penalty(params)
    else:
        rec_H = rec_L = pen2 = 0.0
    return Transfers(emission=emission, recycling_H=rec_H, recycling_L=rec_L,
                     retailer2_penalty=pen2)


def value_warnings(model_id: str, params: ModelParams, menu: ContractMenu,
                   prices: PricePair) -> tuple[str, ...]:
    """Range diagnostics at a decision point (raw values are never clamped)."""
    out: list[str] = []
    q1, q2, _ = demand(params, prices, model_id)
    for label, tau in (("tau_H", menu.tau_H), ("tau_L", menu.tau_L)):
        if not 0.0 <= tau <= 1.0:
            out.append(f"{label}={tau:.6g} outside [0, 1]")
    if q1 < 0.0:
        out.append(f"q1={q1:.6g} negative")
    if model_id in COMPETITIVE_MODELS and q2 < 0.0:
        out.append(f"q2={q2:.6g} negative")
    for label, tau, w in (("H", menu.tau_H, menu.w_H), ("L", menu.tau_L, menu.w_L)):
        if _unit_margin(params, tau, w, model_id) < 0.0:
            out.append(f"manufacturer margin negative on {label} branch")
    if prices.p1 - params.p_m < 0.0:
        out.append("retailer 1 margin p1 - p_m negative")
    if model_id in COMPETITIVE_MODELS and prices.p2 - params.p_m < 0.0:
        out.append("retailer 2 margin p2 - p_m negative")
    return tuple(out)
