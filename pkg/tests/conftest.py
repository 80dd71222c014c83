import numpy as np
import pytest

from qkpr import _kernels
from qkpr.strategies import ANGLE_UPPER, StrategyParams

ACCEPTANCE_LINES = []


def random_density(rng, dim=27, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_params(rng):
    return StrategyParams.from_array(rng.uniform(0, 1, 8) * ANGLE_UPPER)


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    prev = _kernels.use_backend(request.param)
    yield request.param
    _kernels.use_backend(prev)


@pytest.fixture
def acceptance_report():
    def record(number, name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] AC{number} {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("AC")[1].split()[0])):
            terminalreporter.write_line(line)
