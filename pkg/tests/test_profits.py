"""Demand, transfer and profit evaluators: frozen point checks and the
structural identities (accounting, transfer conservation, buy-back
neutrality, linearity in costs)."""

import numpy as np
import pytest

import rscgame as rg

MODELS_WITH_P2 = ("III", "IV", "V")
MODELS_NO_P2 = ("I", "II")


def menu_for(case_rng):
    w_H, w_L = case_rng.uniform(0.0, 8.0, size=2)
    tau_H, tau_L = case_rng.uniform(0.0, 1.0, size=2)
    return rg.ContractMenu(w_H=w_H, w_L=w_L, tau_H=tau_H, tau_L=tau_L)


def prices_for(case_rng, params, model_id):
    p1 = case_rng.uniform(0.3, 0.9 * params.a)
    if model_id in MODELS_WITH_P2:
        return rg.PricePair(p1=p1, p2=case_rng.uniform(0.3, 0.9 * params.a))
    return rg.PricePair(p1=p1)


class TestDemand:
    def test_competitive_point(self, baseline, baseline_prices):
        q1, q2, total = rg.demand(baseline, baseline_prices, "III")
        assert q1 == pytest.approx(2.06, abs=1e-12)
        assert q2 == pytest.approx(1.78, abs=1e-12)
        assert total == pytest.approx(3.84, abs=1e-12)

    def test_single_retailer_chokes_at_a(self, baseline):
        q1, q2, total = rg.demand(baseline, rg.PricePair(p1=baseline.a), "I")
        assert q1 == 0.0 and q2 == 0.0 and total == 0.0

    def test_no_substitution_symmetry(self, baseline):
        params = baseline.with_(eps=1e-12)
        prices = rg.PricePair(p1=1.5, p2=1.5)
        q1, q2, _ = rg.demand(params, prices, "IV")
        assert q1 == pytest.approx(baseline.a - 1.5, abs=1e-9)
        assert q1 == pytest.approx(q2, abs=1e-12)

    def test_missing_p2_is_structural_error(self, baseline):
        with pytest.raises(rg.ModelStructureError):
            rg.demand(baseline, rg.PricePair(p1=1.7), "III")

    def test_p2_forbidden_for_single_retailer(self, baseline, baseline_prices):
        with pytest.raises(rg.ModelStructureError):
            rg.demand(baseline, baseline_prices, "II")

    def test_negative_demand_returned_raw(self, baseline):
        q1, _, _ = rg.demand(baseline, rg.PricePair(p1=baseline.a + 2.0), "I")
        assert q1 == -2.0  # flagged, never clamped
        menu = rg.ContractMenu(0.0, 0.0, 0.0, 0.0)
        warnings = rg.value_warnings("I", baseline, menu, rg.PricePair(p1=baseline.a + 2.0))
        assert any("q1" in w and "negative" in w for w in warnings)


class TestTransfers:
    def test_emission_point(self, baseline):
        assert rg.emission_transfer(baseline, 3.84) == pytest.approx(-6.468, abs=1e-12)

    def test_emission_zero_at_cap(self, baseline):
        quantity = baseline.e_0 / baseline.e_m
        assert rg.emission_transfer(baseline, quantity) == pytest.approx(0.0, abs=1e-12)

    def test_emission_off_when_f_zero(self, baseline):
        assert rg.emission_transfer(baseline.with_(f=0.0), 123.4) == 0.0

    def test_recycling_point(self, baseline):
        assert rg.recycling_transfer(baseline, 0.56) == pytest.approx(-0.48, abs=1e-12)
        assert rg.recycling_transfer(baseline, baseline.tau_0) == pytest.approx(0.0, abs=1e-12)

    def test_retailer2_penalty(self, baseline):
        assert rg.retailer2_penalty(baseline) == pytest.approx(-1.6, abs=1e-12)


class TestProfitPoints:
    def test_manufacturer_single_type(self, baseline):
        params = baseline.with_(mu=1.0)
        menu = rg.ContractMenu(w_H=4.5, w_L=4.5, tau_H=0.5, tau_L=0.5)
        value = rg.manufacturer_profit("I", params, menu, rg.PricePair(p1=1.7))
        assert value == pytest.approx(-6.175, abs=1e-12)  # 1.3 * (-4.75)

    def test_no_recycling_reduces_to_new_product_margin(self, baseline):
        menu = rg.ContractMenu(w_H=5.0, w_L=2.0, tau_H=0.0, tau_L=0.0)
        prices = rg.PricePair(p1=1.7)
        value = rg.manufacturer_profit("I", baseline, menu, prices)
        q1 = baseline.a - 1.7
        assert value == pytest.approx(q1 * (baseline.p_m - baseline.c_m), abs=1e-12)

    def test_emission_model_reduces_when_f_zero(self, baseline, baseline_prices):
        params = baseline.with_(f=0.0)
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        p = rg.PricePair(p1=1.7)
        assert rg.manufacturer_profit("II", params, menu, p) == \
            rg.manufacturer_profit("I", params, menu, p)

    def test_retailer1_competitive_point(self, baseline):
        params = baseline.with_(mu=1.0)
        menu = rg.ContractMenu(w_H=4.5, w_L=4.5, tau_H=0.5, tau_L=0.5)
        value = rg.retailer1_profit("III", params, menu, rg.PricePair(1.7, 1.9))
        assert value == pytest.approx(1.164, abs=1e-12)  # 0.515 + 0.824 - 0.175

    def test_retailer1_zero_at_flat_margins(self, baseline):
        menu = rg.ContractMenu(w_H=0.0, w_L=0.0, tau_H=0.0, tau_L=0.0)
        value = rg.retailer1_profit("I", baseline, menu, rg.PricePair(p1=baseline.p_m))
        assert value == 0.0

    def test_recycling_reward_model_reduces_when_k_zero(self, baseline):
        params = baseline.with_(k=0.0)
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        p = rg.PricePair(1.7, 1.9)
        assert rg.retailer1_profit("V", params, menu, p) == \
            rg.retailer1_profit("IV", params, menu, p)
        assert rg.retailer2_profit("V", params, p) == rg.retailer2_profit("IV", params, p)

    def test_retailer2_points(self, baseline, baseline_prices):
        assert rg.retailer2_profit("III", baseline, baseline_prices) == \
            pytest.approx(1.068, abs=1e-12)
        assert rg.retailer2_profit("V", baseline, baseline_prices) == \
            pytest.approx(-0.532, abs=1e-12)
        flat = rg.PricePair(p1=1.7, p2=baseline.p_m)
        assert rg.retailer2_profit("III", baseline, flat) == 0.0
        assert rg.retailer2_profit("IV", baseline, flat) == 0.0

    def test_retailer2_absent_in_centralized_models(self, baseline, baseline_prices):
        with pytest.raises(rg.ModelStructureError):
            rg.retailer2_profit("I", baseline, rg.PricePair(p1=1.7))


class TestChainIdentities:
    @pytest.mark.parametrize("model_id", ("I", "II", "III", "IV", "V"))
    def test_chain_equals_member_sum(self, baseline, model_id):
        rng = np.random.default_rng(7)
        for _ in range(25):
            menu = menu_for(rng)
            prices = prices_for(rng, baseline, model_id)
            total = rg.chain_profit(model_id, baseline, menu, prices)
            parts = rg.manufacturer_profit(model_id, baseline, menu, prices) \
                + rg.retailer1_profit(model_id, baseline, menu, prices)
            if model_id in MODELS_WITH_P2:
                parts += rg.retailer2_profit(model_id, baseline, prices)
            assert abs(total - parts) < 1e-9

    @pytest.mark.parametrize("model_id", MODELS_NO_P2)
    def test_chain_matches_direct_form(self, baseline, model_id):
        rng = np.random.default_rng(8)
        for _ in range(25):
            menu = menu_for(rng)
            prices = prices_for(rng, baseline, model_id)
            assert rg.chain_profit(model_id, baseline, menu, prices) == \
                pytest.approx(rg.chain_profit_direct(model_id, baseline, menu, prices),
                              abs=1e-9)

    def test_chain_at_zero_recycling(self, baseline):
        menu = rg.ContractMenu(1.0, 1.0, 0.0, 0.0)
        prices = rg.PricePair(p1=1.7)
        q1 = baseline.a - 1.7
        assert rg.chain_profit("I", baseline, menu, prices) == \
            pytest.approx(q1 * (1.7 - baseline.c_m), abs=1e-12)

    @pytest.mark.parametrize("model_id", MODELS_NO_P2)
    def test_buy_back_price_cancels_in_chain(self, baseline, model_id):
        prices = rg.PricePair(p1=1.7)
        lo = rg.ContractMenu(0.5, 0.25, 0.4, 0.3)
        hi = rg.ContractMenu(9.5, 7.25, 0.4, 0.3)
        assert rg.chain_profit(model_id, baseline, lo, prices) == \
            pytest.approx(rg.chain_profit(model_id, baseline, hi, prices), abs=1e-9)

    @pytest.mark.parametrize("model_id,use_total", (("II", False), ("IV", True), ("V", True)))
    def test_emission_transfer_conservation(self, baseline, model_id, use_total):
        rng = np.random.default_rng(9)
        for _ in range(10):
            menu = menu_for(rng)
            prices = prices_for(rng, baseline, model_id)
            with_f = rg.manufacturer_profit(model_id, baseline, menu, prices)
            without = rg.manufacturer_profit(model_id, baseline.with_(f=0.0), menu, prices)
            q1, _, total = rg.demand(baseline, prices, model_id)
            base_qty = total if use_total else q1
            assert with_f - without == \
                pytest.approx(rg.emission_transfer(baseline, base_qty), abs=1e-12)


CURRENCY_PARAMS = ("c", "c_d", "c_r", "c_m", "p_m", "f", "k", "beta_H", "beta_L")


class TestLinearityAndPurity:
    @pytest.mark.parametrize("name", CURRENCY_PARAMS)
    def test_profits_linear_in_each_cost_parameter(self, baseline, name):
        # second finite difference vanishes for every member profit
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        prices = rg.PricePair(1.7, 1.9)
        h = 0.125  # exactly representable step

        def at(shift):
            params = baseline.with_(**{name: getattr(baseline, name) + shift})
            return (rg.manufacturer_profit("V", params, menu, prices),
                    rg.retailer1_profit("V", params, menu, prices),
                    rg.retailer2_profit("V", params, prices))

        f0, f1, f2 = at(0.0), at(h), at(2 * h)
        for lo, mid, hi in zip(f0, f1, f2):
            assert abs(hi - 2 * mid + lo) < 1e-9

    def test_evaluators_are_pure(self, baseline, baseline_prices):
        menu = rg.ContractMenu(4.5, 3.3, 0.56, 0.43)
        first = rg.chain_profit("V", baseline, menu, baseline_prices)
        second = rg.chain_profit("V", baseline, menu, baseline_prices)
        assert first == second

    def test_branch_weight_switch(self, baseline, baseline_prices):
        # with the switch, mu weights the L branch: mu=1 then selects L only
        menu = rg.ContractMenu(w_H=4.5, w_L=2.0, tau_H=0.5, tau_L=0.1)
        switched = baseline.with_(mu=1.0, mu_weights_l_branch=True)
        plain_l = baseline.with_(mu=0.0)
        assert rg.retailer1_profit("III", switched, menu, baseline_prices) == \
            rg.retailer1_profit("III", plain_l, menu, baseline_prices)

    def test_value_warnings_flag_out_of_range(self, baseline, baseline_prices):
        menu = rg.ContractMenu(4.5, 3.3, 1.4, -0.2)
        warnings = rg.value_warnings("III", baseline, menu, baseline_prices)
        assert any("tau_H" in w for w in warnings)
        assert any("tau_L" in w for w in warnings)
