import pytest

from ubseq.arithseq import build_sieve_tables


@pytest.fixture(scope="session")
def table():
    return build_sieve_tables(10**5)


@pytest.fixture(scope="session")
def small_table():
    return build_sieve_tables(2000)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
