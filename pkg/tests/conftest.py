import pytest

from isogenous.exceptional import standard_quadruple
from isogenous.presets import preset


@pytest.fixture(scope="session")
def S():
    return preset("z3^2")


@pytest.fixture(scope="session")
def quadruple(S):
    return standard_quadruple(S)
