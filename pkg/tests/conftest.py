import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hlsa import catalog_get, make_field

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def F5():
    return make_field(5)


@pytest.fixture
def F25():
    return make_field(5, 2)


@pytest.fixture
def sl2():
    return catalog_get("sl2", 5, 1)


@pytest.fixture
def heis():
    return catalog_get("superheis", 5, 1)


def vec(*vals):
    return np.array(vals, dtype=np.int64)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
