import dataclasses

import pytest

from reinsgame.config import default_market_params
from reinsgame.expo import constrained_equilibrium
from reinsgame.market import Exponential


@pytest.fixture(scope="session")
def base_params():
    """The embedded reference parameter set (all rates 0.1, horizon 8, beta 1)."""
    return default_market_params()


@pytest.fixture(scope="session")
def base_eq(base_params):
    return constrained_equilibrium(base_params, 0.0)


@pytest.fixture(scope="session")
def eq_path(base_params):
    from reinsgame.valuation import equilibrium_path
    return equilibrium_path(base_params)


def with_beta(params, beta):
    return dataclasses.replace(params, claims=Exponential(beta))
