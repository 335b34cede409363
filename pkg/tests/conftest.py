import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st

from data import catalog
from models.operator_d import AnalyticInput

hypothesis_settings.register_profile("toolkit", deadline=None, max_examples=200)
hypothesis_settings.load_profile("toolkit")

# orders at which truncated series match closed forms to ~1e-10 on |z| <= 0.7
VALUE_ORDER = 96
ROUTE_ORDER = 160


def disk_points(rng: np.random.Generator, n: int, max_modulus: float) -> np.ndarray:
    rho = max_modulus * np.sqrt(rng.random(n))
    return rho * np.exp(2j * np.pi * rng.random(n))


def disk_point_strategy(max_modulus: float):
    return st.builds(
        lambda rho, t: complex(rho * np.cos(t), rho * np.sin(t)),
        st.floats(0.0, max_modulus),
        st.floats(0.0, 2 * np.pi),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(params=catalog.list_names())
def catalog_name(request):
    return request.param


@pytest.fixture
def catalog_input(catalog_name):
    return AnalyticInput.from_catalog(catalog_name)
