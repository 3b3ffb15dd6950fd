import os

import pytest

from tropj import jinv

EXAMPLE = [0, 1, 100, 100, 1, 100, 1, 1, 3, 7]  # u11 u30 u20 u10 u00 u21 u01 u12 u02 u03


@pytest.fixture(scope="session")
def inv(tmp_path_factory):
    os.environ[jinv.CACHE_ENV] = str(tmp_path_factory.mktemp("cache") / "invariants.json")
    return jinv.invariants()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
