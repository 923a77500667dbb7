"""Closed-form transcriptions: frozen baseline values, the literal-family
discrepancies, the harmonized reduction identities, and singularity
handling.  Expected numbers were computed independently from the formula
text with plain arithmetic."""

import pytest

import rscgame as rg


class TestCentralizedValues:
    def test_baseline_values(self, baseline, baseline_prices):
        values = rg.decision_values("I", baseline, baseline_prices)
        assert values["tau_H"] == pytest.approx(-1.4625, abs=1e-12)
        assert values["tau_L"] == pytest.approx(-6.825, abs=1e-12)
        assert values["w_H"] == pytest.approx(3.5875, abs=1e-12)
        assert values["w_L"] == pytest.approx(1.35625, abs=1e-12)

    def test_out_of_range_rates_flagged_not_clamped(self, baseline, baseline_prices):
        sol = rg.solve_closed_form("I", baseline, baseline_prices)
        assert sol.menu.tau_H == pytest.approx(-1.4625, abs=1e-12)
        assert not sol.diagnostics.in_range
        assert any("tau_H" in w for w in sol.diagnostics.warnings)

    def test_carbon_variant_reduces_at_f_zero(self, baseline, baseline_prices):
        params = baseline.with_(f=0.0)
        plain = rg.decision_values("I", params, baseline_prices)
        carbon = rg.decision_values("II", params, baseline_prices)
        for name, value in plain.items():
            assert carbon[name] == value

    def test_literal_family_keeps_offset_at_f_zero(self, baseline, baseline_prices):
        # the literal w_H formula carries an extra additive term that does
        # not vanish with the emission charge: exactly +1/4 at f = 0
        params = baseline.with_(f=0.0)
        plain = rg.decision_values("I", params, baseline_prices, family="literal")
        carbon = rg.decision_values("II", params, baseline_prices, family="literal")
        assert carbon["w_H"] - plain["w_H"] == pytest.approx(0.25, abs=1e-12)
        assert carbon["w_L"] == plain["w_L"]
        assert carbon["tau_H"] == plain["tau_H"]

    def test_evaluation_price_required(self, baseline):
        with pytest.raises(ValueError):
            rg.decision_values("I", baseline, None)

    def test_emission_charge_lowers_both_rates(self, baseline, baseline_prices):
        plain = rg.decision_values("I", baseline, baseline_prices)
        carbon = rg.decision_values("II", baseline, baseline_prices)
        fe = baseline.f * baseline.e_m
        assert carbon["tau_H"] - plain["tau_H"] == \
            pytest.approx(-fe / (4.0 * baseline.beta_H), abs=1e-12)
        gap = baseline.beta_L - baseline.mu * baseline.beta_H
        assert carbon["tau_L"] - plain["tau_L"] == \
            pytest.approx(-fe / (4.0 * gap), abs=1e-12)


class TestCompetitiveValues:
    def test_baseline_menu_values(self, baseline):
        v3 = rg.decision_values("III", baseline)
        assert v3["w_H"] == pytest.approx(0.345530981539024, abs=1e-12)
        assert v3["w_L"] == pytest.approx(0.5437250959605191, abs=1e-12)
        v4 = rg.decision_values("IV", baseline)
        assert v4["w_H"] == pytest.approx(0.43874977152257366, abs=1e-12)
        assert v4["w_L"] == pytest.approx(0.6369438859440688, abs=1e-12)
        assert v4["tau_H"] == pytest.approx(15.0, abs=1e-9)
        assert v4["tau_L"] == pytest.approx(-2.9347826086956528, abs=1e-12)
        assert v4["p1"] == pytest.approx(5.547935912725329, abs=1e-12)
        assert v4["p2"] == pytest.approx(4.553712962402287, abs=1e-12)

    def test_literal_menu_denominator_variant(self, baseline):
        lit = rg.decision_values("III", baseline, family="literal")
        assert lit["w_L"] == pytest.approx(0.5049601086402988, abs=1e-12)
        assert lit["w_H"] == pytest.approx(0.345530981539024, abs=1e-12)

    def test_reward_strength_deltas(self, baseline):
        v4 = rg.decision_values("IV", baseline)
        v5 = rg.decision_values("V", baseline)
        assert v5["w_H"] - v4["w_H"] == pytest.approx(-0.13667262969588553, abs=1e-12)
        assert v5["w_L"] - v4["w_L"] == pytest.approx(-0.13673469387755102, abs=1e-12)
        assert v5["tau_H"] - v4["tau_H"] == pytest.approx(43.55555555555556, abs=1e-9)
        assert v5["tau_L"] - v4["tau_L"] == pytest.approx(-4.173913043478261, abs=1e-12)
        assert v5["p1"] - v4["p1"] == pytest.approx(-0.2998750520616409, abs=1e-12)
        assert v5["p2"] - v4["p2"] == pytest.approx(-0.2998750520616409, abs=1e-12)

    def test_literal_reward_delta_keeps_stray_term(self, baseline):
        v4 = rg.decision_values("IV", baseline, family="literal")
        v5 = rg.decision_values("V", baseline, family="literal")
        assert v5["tau_L"] - v4["tau_L"] == pytest.approx(-3.9565217391304346, abs=1e-12)

    def test_reductions_hold_on_random_draws(self):
        for case in rg.feasible_draws(8, seed=4242):
            p = case.params
            v3 = rg.decision_values("III", p.with_(f=0.0))
            v4 = rg.decision_values("IV", p.with_(f=0.0))
            assert all(abs(v4[k] - v3[k]) < 1e-12 for k in v3)
            v4_full = rg.decision_values("IV", p)
            v5 = rg.decision_values("V", p.with_(k=0.0))
            assert all(abs(v5[k] - v4_full[k]) < 1e-12 for k in v4_full)


class TestSingularities:
    def test_screening_gap_zero_is_singular(self, baseline, baseline_prices):
        params = baseline.with_(mu=baseline.beta_L / baseline.beta_H)
        assert params.beta_L - params.mu * params.beta_H == 0.0
        with pytest.raises(rg.SingularExpressionError) as err:
            rg.decision_values("I", params, baseline_prices)
        assert "beta_L - mu*beta_H" in str(err.value)

    def test_decision_table_reports_per_variable_status(self, baseline, baseline_prices):
        params = baseline.with_(mu=baseline.beta_L / baseline.beta_H)
        table = rg.decision_table("I", params, baseline_prices)
        assert isinstance(table["tau_H"], float)  # own denominator is fine
        assert isinstance(table["tau_L"], str) and table["tau_L"].startswith("singular")
        assert isinstance(table["w_H"], str) and "beta_L - mu*beta_H" in table["w_H"]

    def test_unknown_family_rejected(self, baseline):
        with pytest.raises(ValueError):
            rg.decision_values("III", baseline, family="other")

    def test_full_solution_carries_screening_and_provenance(self, baseline):
        sol = rg.solve_closed_form("IV", baseline)
        assert sol.provenance == "closed_form"
        assert sol.model_id == "IV"
        assert not sol.diagnostics.in_range  # recycling rates far outside [0, 1]
        assert sol.profits.retailer2 is not None
        assert abs(sol.profits.chain
                   - sol.profits.manufacturer
                   - sol.profits.retailer1
                   - sol.profits.retailer2) < 1e-9
