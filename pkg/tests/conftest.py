import pytest

from helpers import existence


@pytest.fixture
def ex():
    return existence()


@pytest.fixture
def cfg(ex):
    from stablecrd.textio import parse_config
    return lambda text: parse_config(text, ex.species)
