"""Participation and incentive-compatibility screening checks."""

import numpy as np
import pytest

import rscgame as rg


def direct_payoff(type_label, menu, params, prices, model_id, item,
                  transfer="chosen_item"):
    """Independent re-derivation of a type's payoff from first principles."""
    w, tau = menu.item(item)
    beta = params.beta_H if type_label == "H" else params.beta_L
    if model_id in ("III", "IV", "V"):
        q1 = params.a - prices.p1 + params.eps * prices.p2
    else:
        q1 = params.a - prices.p1
    value = q1 * tau * (w - params.c) + q1 * (prices.p1 - params.p_m) - beta * tau ** 2
    if model_id == "V":
        tau_t = tau if transfer == "chosen_item" else menu.item(type_label)[1]
        value += params.k * (tau_t - params.tau_0)
    return value


class TestTypePayoff:
    def test_own_item_matches_single_type_profit(self, baseline, baseline_prices):
        params = baseline.with_(mu=1.0)
        menu = rg.ContractMenu(4.5, 4.5, 0.5, 0.5)
        payoff = rg.type_payoff("H", menu, params, baseline_prices, "III", "H")
        assert payoff == pytest.approx(1.164, abs=1e-12)
        assert payoff == pytest.approx(
            rg.retailer1_profit("III", params, menu, baseline_prices), abs=1e-12)

    def test_identical_items_make_ic_slacks_zero(self, baseline, baseline_prices):
        menu = rg.ContractMenu(w_H=3.0, w_L=3.0, tau_H=0.4, tau_L=0.4)
        report = rg.screening_check(menu, baseline, baseline_prices, "III")
        assert report.ic_H == 0.0
        assert report.ic_L == 0.0

    def test_unknown_type_rejected(self, baseline, baseline_prices):
        menu = rg.ContractMenu(3.0, 3.0, 0.4, 0.4)
        with pytest.raises(ValueError):
            rg.type_payoff("X", menu, baseline, baseline_prices, "III", "H")

    def test_agrees_with_direct_rederivation(self, baseline):
        rng = np.random.default_rng(12)
        for model_id in ("I", "II", "III", "IV", "V"):
            for _ in range(20):
                menu = rg.ContractMenu(*rng.uniform(0, 8, 2), *rng.uniform(0, 1, 2))
                p2 = rng.uniform(0.5, 2.5) if model_id in ("III", "IV", "V") else None
                prices = rg.PricePair(p1=rng.uniform(0.5, 2.5), p2=p2)
                for t in ("H", "L"):
                    for item in ("H", "L"):
                        got = rg.type_payoff(t, menu, baseline, prices, model_id, item)
                        want = direct_payoff(t, menu, baseline, prices, model_id, item)
                        assert got == pytest.approx(want, abs=1e-12)


class TestScreeningCheck:
    def test_zero_profit_boundary(self, baseline):
        menu = rg.ContractMenu(0.0, 0.0, 0.0, 0.0)
        prices = rg.PricePair(p1=baseline.p_m)
        report = rg.screening_check(menu, baseline, prices, "I")
        assert report.feasible
        assert report.as_dict() == {"ir_L": 0.0, "ir_H": 0.0, "ic_H": 0.0, "ic_L": 0.0}
        assert set(report.binding) == {"ir_L", "ir_H", "ic_H", "ic_L"}

    def test_reservation_profit_can_break_participation(self, baseline, baseline_prices):
        params = baseline.with_(mu=1.0, pi_R0=2.0)
        menu = rg.ContractMenu(4.5, 4.5, 0.5, 0.5)
        report = rg.screening_check(menu, params, baseline_prices, "III")
        assert report.ir_H == pytest.approx(-0.836, abs=1e-12)
        assert not report.feasible
        name, slack = report.most_violated()
        assert name in ("ir_H", "ir_L")
        assert slack < 0

    def test_tolerance_must_be_positive(self, baseline, baseline_prices):
        menu = rg.ContractMenu(3.0, 3.0, 0.4, 0.4)
        with pytest.raises(ValueError):
            rg.screening_check(menu, baseline, baseline_prices, "III", tol=0.0)

    def test_low_type_ic_condition_over_menu_grid(self, baseline, baseline_prices):
        # with a flat buy-back price and tau_H > tau_L, the L type keeps its
        # item exactly when the collection margin gain stays below the cost gap
        q1, _, _ = rg.demand(baseline, baseline_prices, "III")
        for w in np.linspace(0.0, 10.0, 50):
            for tau_H in np.linspace(0.02, 1.0, 50):
                tau_L = 0.5 * tau_H
                menu = rg.ContractMenu(w, w, tau_H, tau_L)
                report = rg.screening_check(menu, baseline, baseline_prices, "III")
                gain = q1 * (w - baseline.c) * (tau_H - tau_L)
                cost_gap = baseline.beta_L * (tau_H ** 2 - tau_L ** 2)
                assert (report.ic_L >= 0.0) == (gain <= cost_gap + 1e-15)

    def test_constant_payoff_shift_moves_only_participation(self, baseline,
                                                            baseline_prices):
        # lowering the transfer price adds the same amount to every payoff
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        base = rg.screening_check(menu, baseline, baseline_prices, "III")
        shifted_params = baseline.with_(p_m=baseline.p_m - 0.25)
        shifted = rg.screening_check(menu, shifted_params, baseline_prices, "III")
        q1, _, _ = rg.demand(baseline, baseline_prices, "III")
        lift = q1 * 0.25
        assert shifted.ir_H - base.ir_H == pytest.approx(lift, abs=1e-9)
        assert shifted.ir_L - base.ir_L == pytest.approx(lift, abs=1e-9)
        assert shifted.ic_H == pytest.approx(base.ic_H, abs=1e-9)
        assert shifted.ic_L == pytest.approx(base.ic_L, abs=1e-9)


class TestRecyclingTransferInScreening:
    def test_slack_shifts_relative_to_no_reward_model(self, baseline, baseline_prices):
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        base = rg.screening_check(menu, baseline, baseline_prices, "IV")
        with_k = rg.screening_check(menu, baseline, baseline_prices, "V")
        k, tau_0 = baseline.k, baseline.tau_0
        assert with_k.ir_H - base.ir_H == pytest.approx(k * (menu.tau_H - tau_0), abs=1e-12)
        assert with_k.ir_L - base.ir_L == pytest.approx(k * (menu.tau_L - tau_0), abs=1e-12)
        assert with_k.ic_H - base.ic_H == pytest.approx(k * (menu.tau_H - menu.tau_L), abs=1e-12)
        assert with_k.ic_L - base.ic_L == pytest.approx(k * (menu.tau_L - menu.tau_H), abs=1e-12)

    def test_own_type_transfer_reading_cancels_from_ic(self, baseline, baseline_prices):
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        base = rg.screening_check(menu, baseline, baseline_prices, "IV")
        alt = rg.screening_check(menu, baseline, baseline_prices, "V",
                                 transfer_on_deviation="own_type")
        assert alt.ic_H == pytest.approx(base.ic_H, abs=1e-12)
        assert alt.ic_L == pytest.approx(base.ic_L, abs=1e-12)
        # participation still carries the transfer
        assert alt.ir_H - base.ir_H == pytest.approx(
            baseline.k * (menu.tau_H - baseline.tau_0), abs=1e-12)

    def test_unknown_transfer_reading_rejected(self, baseline, baseline_prices):
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        with pytest.raises(ValueError):
            rg.type_payoff("H", menu, baseline, baseline_prices, "V", "H",
                           transfer_on_deviation="nonsense")
