import pytest

from mvphe import RandomStream, keygen
from mvphe.presets import toy_additive_params, toy_mult_params


@pytest.fixture(scope="session")
def toy_params():
    return toy_additive_params()


@pytest.fixture(scope="session")
def toy_params_noiseless():
    return toy_additive_params(alpha="0")


@pytest.fixture(scope="session")
def mult_params():
    return toy_mult_params()


@pytest.fixture(scope="session")
def mult_params_noiseless():
    return toy_mult_params(alpha="0")


@pytest.fixture(scope="session")
def toy_key(toy_params):
    return keygen(toy_params, RandomStream(1001))


@pytest.fixture(scope="session")
def mult_key(mult_params):
    return keygen(mult_params, RandomStream(1002))


@pytest.fixture(scope="session")
def toy_key_noiseless(toy_params_noiseless):
    return keygen(toy_params_noiseless, RandomStream(1003))


@pytest.fixture(scope="session")
def mult_key_noiseless(mult_params_noiseless):
    return keygen(mult_params_noiseless, RandomStream(1004))
