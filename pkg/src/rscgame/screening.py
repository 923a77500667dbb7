"""Participation (IR) and incentive-compatibility (IC) screening checks.

The menu is designed so each retailer-1 type self-selects its intended
item.  A type's payoff from an item combines the item's (w, tau) with the
*type's own* difficulty coefficient, which is what makes the cross (IC)
constraints bite.

In model V the government transfer k*(tau - tau_0) enters every payoff.
Two readings of the deviation payoff are supported via
``transfer_on_deviation``:

  "chosen_item"  (default) the transfer follows the realized recycling rate,
                 i.e. the tau of the item actually chosen;
  "own_type"     the transfer is pinned to the deviator's designated item,
                 which makes the transfer cancel from both sides of each IC
                 inequality.
"""

from __future__ import annotations

from .profits import demand, recycling_transfer
from .types import (
    RECYCLING_RP_MODELS,
    ContractMenu,
    ModelParams,
    PricePair,
    ScreeningReport,
)

DEFAULT_FEASIBILITY_TOL = 1e-6

_BETA = {"H": "beta_H", "L": "beta_L"}


def type_payoff(type_label: str, menu: ContractMenu, params: ModelParams,
                prices: PricePair, model_id: str, as_if_item: str,
                transfer_on_deviation: str = "chosen_item"):
    """Payoff of a ``type_label`` retailer choosing menu item ``as_if_item``.

    q1*tau_item*(w_item - c) + q1*(p1 - p_m) - beta_type*tau_item^2, plus the
    recycling transfer in model V (see module docstring for which tau the
    transfer uses on deviation).
    """
    if type_label not in _BETA:
        raise ValueError(f"unknown type {type_label!r}")
    w_item, tau_item = menu.item(as_if_item)
    beta = getattr(params, _BETA[type_label])
    q1, _, _ = demand(params, prices, model_id)
    val = q1 * tau_item * (w_item - params.c) + q1 * (prices.p1 - params.p_m) \
        - beta * tau_item * tau_item
    if model_id in RECYCLING_RP_MODELS:
        if transfer_on_deviation == "chosen_item":
            tau_transfer = tau_item
        elif transfer_on_deviation == "own_type":
            tau_transfer = menu.item(type_label)[1]
        else:
            raise ValueError(f"unknown transfer_on_deviation {transfer_on_deviation!r}")
        val = val + recycling_transfer(params, tau_transfer)
    return val


def screening_check(menu: ContractMenu, params: ModelParams, prices: PricePair,
                    model_id: str, tol: float = DEFAULT_FEASIBILITY_TOL,
                    transfer_on_deviation: str = "chosen_item") -> ScreeningReport:
    """Evaluate the four screening slacks and classify feasibility.

    ir_t = payoff(t, item t) - pi_R0 and ic_t = payoff(t, item t) -
    payoff(t, other item); the menu is feasible iff every slack >= -tol.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive (got {tol})")

    def pay(t: str, item: str):
        return type_payoff(t, menu, params, prices, model_id, item,
                           transfer_on_deviation=transfer_on_deviation)

    own_H, own_L = pay("H", "H"), pay("L", "L")
    slacks = {
        "ir_L": own_L - params.pi_R0,
        "ir_H": own_H - params.pi_R0,
        "ic_H": own_H - pay("H", "L"),
        "ic_L": own_L - pay("L", "H"),
    }
    binding = tuple(name for name in ("ir_L", "ir_H", "ic_H", "ic_L")
                    if abs(slacks[name]) <= tol)
    feasible = all(s >= -tol for s in slacks.values())
    return ScreeningReport(ir_L=slacks["ir_L"], ir_H=slacks["ir_H"],
                           ic_H=slacks["ic_H"], ic_L=slacks["ic_L"],
                           tol=tol, binding=binding, feasible=bool(feasible))
