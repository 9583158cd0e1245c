import pytest

from logdepth.circuits import paper_example
from logdepth.simulation import simulate_pair

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}" + (f" -- {detail}" if detail else ""))


@pytest.fixture(scope="session")
def example_pair():
    return paper_example()


@pytest.fixture(scope="session")
def example_trace(example_pair):
    return simulate_pair(example_pair)
