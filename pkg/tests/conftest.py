import math

import pytest

from qhhg.band import zno
from qhhg.drive import PulseSpec

ZNO_PHOTONS = 7.35e11
ZNO_SQUEEZING = 14.3548


@pytest.fixture(scope="session")
def band():
    return zno()


@pytest.fixture(scope="session")
def pulse():
    return PulseSpec()


@pytest.fixture(scope="session")
def coherent_amp():
    return math.sqrt(ZNO_PHOTONS)


_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        name = report.nodeid.split("::")[-1]
        measured = dict(report.user_properties).get("measured", "")
        _criteria[name] = ("PASS" if report.passed else "FAIL", measured)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        status, measured = _criteria[name]
        terminalreporter.write_line(f"{status}  {name}  {measured}")
