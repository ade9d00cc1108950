import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from lsalgebroid.corpus import abelian, idempotent_point, point_algebra, tangent
from lsalgebroid.scalar import Base

settings.register_profile(
    "default", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def base2():
    return Base(("x1", "x2"))


@pytest.fixture
def t1():
    return tangent(("x",))


@pytest.fixture
def t2():
    return tangent(("x1", "x2"))


@pytest.fixture
def ab():
    return abelian(2)


@pytest.fixture
def idem():
    return idempotent_point()


@pytest.fixture
def swap():
    return point_algebra(2, {(0, 1): {0: 1}, (1, 0): {1: 1}})


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
