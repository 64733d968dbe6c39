import pytest

from medianbv.generators import triod, triod_function


@pytest.fixture
def tri():
    return triod()


@pytest.fixture
def tri_f():
    return triod_function()


_acceptance_lines = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _acceptance_lines.extend(v for k, v in report.user_properties if k == "acceptance")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
