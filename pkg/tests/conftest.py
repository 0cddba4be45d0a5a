import numpy as np
import pytest

from conewave.metric import ConicalParams
from conewave.mollify import (RegularizedField, gaussian_mollifier,
                              moment_corrected_mollifier, strict_net_mollifier)


@pytest.fixture(scope="session")
def params_half():
    return ConicalParams(0.5)


@pytest.fixture(scope="session")
def field_half(params_half):
    """Variant A Gaussian field at alpha = 0.5 (response cache shared)."""
    return RegularizedField(params_half, gaussian_mollifier())


@pytest.fixture(scope="session")
def field_flat():
    return RegularizedField(ConicalParams(1.0), gaussian_mollifier())


@pytest.fixture(scope="session")
def field_moment(params_half):
    return RegularizedField(params_half, moment_corrected_mollifier())


@pytest.fixture(scope="session")
def field_net():
    return RegularizedField(ConicalParams(0.2), strict_net_mollifier())


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
