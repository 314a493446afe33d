import pytest

from freymod.curves import load_sample_curves
from freymod.cyclotomic import real_cyclotomic_field


@pytest.fixture(scope="session")
def K5():
    return real_cyclotomic_field(5)


@pytest.fixture(scope="session")
def K7():
    return real_cyclotomic_field(7)


@pytest.fixture(scope="session")
def sample_curves():
    return load_sample_curves()
