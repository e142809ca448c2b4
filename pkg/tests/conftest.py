import numpy as np
import pytest

from levelstat import _fallback
from levelstat._backend import kernels

# the worked example: ranks of an 11-point sample
EXAMPLE = (5, 2, 11, 9, 8, 1, 3, 10, 4, 7, 6)
EXAMPLE_SAMPLE = (0.473, 0.117, 0.973, 0.832, 0.771, 0.032, 0.251, 0.914, 0.343, 0.652, 0.574)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running (minutes)")


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture(params=["compiled", "python"])
def backend(request):
    if request.param == "compiled" and kernels is _fallback:
        pytest.skip("compiled extension not built")
    return kernels if request.param == "compiled" else _fallback


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
