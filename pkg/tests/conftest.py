import numpy as np
import pytest

from config.settings import get_settings


@pytest.fixture(autouse=True)
def serial_settings(monkeypatch):
    """Run every test in-process unless it opts into a pool."""
    monkeypatch.setenv("QGSM_WORKERS", "1")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def parallel_settings(monkeypatch):
    monkeypatch.setenv("QGSM_WORKERS", "3")
    monkeypatch.setenv("QGSM_PARALLEL_MIN_COUNT", "1")
    monkeypatch.setenv("QGSM_SEARCH_BLOCK_SIZE", "7")
    get_settings.cache_clear()
    return get_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(42)
