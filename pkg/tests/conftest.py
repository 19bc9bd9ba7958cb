from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from lgspin.poly import D5, FIVE_CHAIN, LOOP_2323, parse_polynomial

settings.register_profile("lgspin", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("lgspin")


@pytest.fixture(scope="session")
def five_chain():
    return parse_polynomial(FIVE_CHAIN)


@pytest.fixture(scope="session")
def d5():
    return parse_polynomial(D5)


@pytest.fixture(scope="session")
def loop2323():
    return parse_polynomial(LOOP_2323)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
