"""Solvers and checks for five reverse-supply-chain recycling game models.

A manufacturer screens a privately-informed recycling retailer with a menu
of buy-back contracts while a second retailer competes on price; the
government may add an emission transfer and a recycling-rate
reward/penalty.  The package evaluates the profit structures, checks the
screening constraints, transcribes the published closed-form solutions
(in a literal and a harmonized variant), solves every model with an
independent numerical method, and runs the comparative-statics checks and
parameter sweeps of the numerical study.
"""

__version__ = "0.1.0"

from .closed_form import decision_table, decision_values, solve_closed_form
from .comparison import (
    ComparisonTable,
    OrderingCheck,
    SweepTable,
    compare_models,
    load_reference,
    ordering_checks,
    reference_deviations,
    run_sweep,
)
from .config import ConfigError, RunConfig, load_config
from .oracle import (
    CrossCheckReport,
    FollowerEquilibrium,
    SolveOptions,
    centralized_optimize,
    cross_check,
    follower_equilibrium,
    leader_optimize,
    nash_deviation_gains,
    retailer2_best_response,
    solve_oracle,
    stationarity_residuals,
)
from .profits import (
    chain_profit,
    chain_profit_direct,
    demand,
    emission_transfer,
    manufacturer_profit,
    recycling_transfer,
    retailer1_profit,
    retailer2_penalty,
    retailer2_profit,
    transfers_at,
    value_warnings,
)
from .propositions import PropositionReport, check_all_propositions, check_proposition
from .sampling import DrawCase, feasible_draws
from .screening import screening_check, type_payoff
from .types import (
    COMPETITIVE_MODELS,
    MODELS,
    ContractMenu,
    Diagnostics,
    DivergenceError,
    InfeasibleMenuError,
    ModelParams,
    ModelStructureError,
    PricePair,
    Profits,
    ScreeningReport,
    SingularExpressionError,
    Solution,
    TypeProfile,
    section6_params,
    type_profiles,
)

__all__ = [name for name in dir() if not name.startswith("_")]
