import numpy as np
import pytest

from greenkde.datagen import sample_gaussian
from greenkde.density import fit_model
from greenkde.solver import FitConfig


@pytest.fixture(scope="session")
def small_model():
    """Converged field on a 400-point 2-D Gaussian."""
    X = sample_gaussian(2, 400, 1.0, seed=11)
    return fit_model(X, FitConfig(n_large_fit=5, restarts=1, seed=2))


@pytest.fixture(scope="session")
def small_model_3d():
    X = sample_gaussian(3, 300, 1.0, seed=12)
    return fit_model(X, FitConfig(n_large_fit=4, restarts=0, seed=3))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
