import pytest
from hypothesis import HealthCheck, settings

from graded_derivations import Grading, Heisenberg, Integers, Symmetric, DirectProduct, enumerate_window

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def Z():
    return Integers()


@pytest.fixture
def gr_z(Z):
    return Grading(Z, {"x": 1})


@pytest.fixture
def H3():
    return Heisenberg()


@pytest.fixture
def S3():
    return Symmetric(3)


@pytest.fixture
def ZxS3():
    return DirectProduct([Integers(), Symmetric(3)])


@pytest.fixture
def wz(Z):
    return enumerate_window(Z, 4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
