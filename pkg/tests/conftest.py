import json
from pathlib import Path

import pytest

from tourcast.model import AvailabilityCode, Instance, Weekday

FIXTURES = Path(__file__).parent / "fixtures"

A, R, X = AvailabilityCode.AVAILABLE, AvailabilityCode.RELATIVE, AvailabilityCode.ABSOLUTE


def make_instance(mile, availability=None, *, days=None, start=Weekday.MON, names=None, travel_limit=500):
    m = len(mile)
    if availability is None:
        availability = [[A] * m for _ in range(days)]
    names = names or [f"C{k}" for k in range(1, m + 1)]
    return Instance(len(availability), start, names, mile, availability, travel_limit=travel_limit)


@pytest.fixture(scope="session")
def appendix():
    return json.loads((FIXTURES / "appendix_tours.json").read_text())


@pytest.fixture(scope="session")
def sample():
    from tourcast import load_sample

    return load_sample()


# one pass/fail line per acceptance criterion in the terminal summary
_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = f"AC{marker.args[0]:02d} {marker.args[1]}"
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[key] = "PASS" if rep.passed else "FAIL"


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{_ACCEPTANCE[key]}  {key}")
