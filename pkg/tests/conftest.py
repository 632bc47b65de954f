# Fixtures partagées
import numpy as np
import pytest

from twrn_ce.core.config import settings
from twrn_ce.schemas.channel import TwrnConfig


@pytest.fixture(autouse=True, scope="session")
def no_progress_bar():
    previous = settings.PROGRESS
    settings.PROGRESS = False
    yield
    settings.PROGRESS = previous


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def complex_normal():
    def draw(rng, size):
        return rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return draw


@pytest.fixture
def protocol_cfg():
    return TwrnConfig(L=16, N=64, S0=2, snr_db=20.0)


@pytest.fixture
def noiseless_cfg():
    return TwrnConfig(L=16, N=64, S0=2, noiseless=True)
