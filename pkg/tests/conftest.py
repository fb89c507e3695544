import pytest

from config.logging_config import configure_logging
from distributions.catalog import centered, make_distribution
from verify.verification_service import verification_service


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    configure_logging(level="WARNING")


@pytest.fixture(autouse=True)
def single_worker():
    """CLI runs may raise the worker count; every test starts from one thread"""
    workers = verification_service.workers
    verification_service.workers = 1
    yield
    verification_service.workers = workers


@pytest.fixture
def law():
    """make_distribution shortcut: law("poisson", lam=2)"""
    return make_distribution


@pytest.fixture
def centered_law():
    def build(name, **params):
        return centered(make_distribution(name, **params))

    return build
