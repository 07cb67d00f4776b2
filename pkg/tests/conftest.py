from __future__ import annotations

import sys

import pytest
from hypothesis import HealthCheck, settings

from leekit.witness import construct_dpl3, construct_dpl11, lift_to_code

# derandomize pins the example stream, so reruns see the same cases
settings.register_profile(
    "pinned",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    database=None,
)
settings.load_profile("pinned")


@pytest.fixture(scope="session")
def w3():
    return construct_dpl3()


@pytest.fixture(scope="session")
def w11():
    return construct_dpl11()


@pytest.fixture(scope="session")
def phi3(w3):
    return lift_to_code(w3)


@pytest.fixture(scope="session")
def phi11(w11):
    return lift_to_code(w11)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
