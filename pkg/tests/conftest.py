import numpy as np
import pytest

import roughlim as R


@pytest.fixture
def ex21():
    return R.load_fixture("example21")


@pytest.fixture
def const5():
    return R.load_fixture("constant")


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Log one acceptance line; shown in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def log(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        lines.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
