import os
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from korovkit import ScalarFunction, make_bernstein, make_szasz, load_family, quadratic_growth, unload_all


CONFIGS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'configs')

settings.register_profile('korovkit', deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('korovkit')


@pytest.fixture(autouse=True)
def clear_families():
	yield
	unload_all()


@pytest.fixture
def g():
	return quadratic_growth()


@pytest.fixture
def identity():
	return ScalarFunction(lambda u: u[:, 0], label='u')


@pytest.fixture
def square():
	return ScalarFunction(lambda u: u[:, 0] ** 2, label='u^2')


@pytest.fixture
def bernstein_pairs():
	return [make_bernstein(n) for n in (10, 100, 1000)]


@pytest.fixture
def szasz_pairs():
	return [make_szasz(n) for n in (10, 100, 1000)]


@pytest.fixture
def negative_pair():
	return load_family(os.path.join(CONFIGS, 'negative_weight.family'))


@pytest.fixture
def configs():
	return CONFIGS
