import pytest

from detflow.netio import load_fixture

# one "PASS/FAIL criterion N: ..." line per acceptance criterion, echoed at the end
ACCEPTANCE_LINES = []


@pytest.fixture
def fixture_net():
    return load_fixture


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
