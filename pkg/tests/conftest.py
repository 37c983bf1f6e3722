import pytest

from monotri.hecke import build_weak_dag

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def dags():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = build_weak_dag(n)
        return cache[n]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
