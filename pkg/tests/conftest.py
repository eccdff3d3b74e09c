import numpy as np
import pytest

from rcqm.grid import GridSpec, make_grid
from rcqm import states


# One shared verification setup: 31^3 box of side 40, unit mass, and a
# width-2 Gaussian packet with |k0| = 0.5 along the main diagonal (the
# orientation with the largest clearance from the momentum-lattice faces).


@pytest.fixture(scope="session")
def grid3():
    return make_grid(GridSpec(3, 31, 40.0, 1.0))


@pytest.fixture(scope="session")
def packet3(grid3):
    k = 0.5 / np.sqrt(3.0)
    return states.gaussian_packet(grid3, (0.0, 0.0, 0.0), (k, k, k), 2.0,
                                  (1.0, 0.0, 0.0, 0.0))


# Fine 1-d lattice on which periodic-wrap tails sit below 1e-12, for
# checks whose stated tolerances assume a wall-clear packet.


@pytest.fixture(scope="session")
def grid1():
    return make_grid(GridSpec(1, 201, 60.0, 1.0))


@pytest.fixture(scope="session")
def packet1(grid1):
    return states.gaussian_packet(grid1, (0.0,), (0.5,), 2.0,
                                  (1.0, 0.0, 0.0, 0.0))


# The acceptance suite records one PASS/FAIL line per criterion here;
# they are echoed after the run regardless of capture settings.

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
