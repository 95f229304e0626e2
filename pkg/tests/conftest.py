import pytest

from causalpoly.catalog import vertex_matrix
from causalpoly.causal import FullyCausal, TwoCausal


@pytest.fixture(scope="session")
def v3_two():
    return vertex_matrix(3, TwoCausal())


@pytest.fixture(scope="session")
def v3_fully():
    return vertex_matrix(3, FullyCausal())


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
