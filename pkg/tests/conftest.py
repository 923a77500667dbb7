import pytest

from rscgame import PricePair, SolveOptions, feasible_draws, section6_params


@pytest.fixture(scope="session")
def baseline():
    """The numerical-study parameter set (mu=0.5, pi_R0=0 defaults)."""
    return section6_params()


@pytest.fixture(scope="session")
def baseline_prices():
    return PricePair(p1=1.7, p2=1.9)


@pytest.fixture(scope="session")
def fast_opts():
    """Coarse-but-deterministic solver options for structure-level tests."""
    return SolveOptions(grid_points=24, refine_rounds=4, damping=1.0)


@pytest.fixture(scope="session")
def deep_opts():
    return SolveOptions()


@pytest.fixture(scope="session")
def draws10():
    return feasible_draws(10, seed=91)
