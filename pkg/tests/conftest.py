import pytest

from codimlab import fixtures


@pytest.fixture(scope="session")
def fx():
    """All bundled fixtures, parsed from the shipped JSON files."""
    return {name: fixtures.load(name) for name in fixtures.FIXTURE_NAMES}


@pytest.fixture(scope="session")
def sl2(fx):
    return fx["sl2"].algebra


@pytest.fixture(scope="session")
def gl2(fx):
    return fx["gl2"].algebra


@pytest.fixture(scope="session")
def h3(fx):
    return fx["heisenberg_h3"].algebra


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Lines reported by the acceptance criteria, echoed in the terminal summary."""
    lines = []
    request.config._acceptance_lines = lines
    return lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
