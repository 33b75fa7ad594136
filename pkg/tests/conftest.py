import numpy as np
import pytest

from paritynet.circuit import Circuit
from paritynet.gf2 import ParityTable
from paritynet.topology import grid

# Parity table printed for the all-to-all worked example (rows = qubits 1..5).
FIG2A_ROWS = [
    [0, 0, 1, 1, 1, 1, 1],
    [1, 1, 0, 0, 1, 1, 1],
    [1, 1, 0, 1, 0, 0, 1],
    [0, 1, 1, 1, 0, 1, 1],
    [1, 0, 1, 1, 1, 1, 1],
]
# Same table after the first iteration.
FIG2B_ROWS = [
    [0, 0, 1, 1, 1, 1, 1],
    [0, 0, 0, 1, 1, 1, 0],
    [1, 1, 0, 1, 0, 0, 1],
    [0, 1, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 0, 0],
]
FIG1_CNOTS = [(2, 1), (3, 1), (1, 2), (4, 2)]
FIG1_COLUMNS = ["1100", "1110", "1011"]
FIG3_TERMINALS = {1, 6, 8, 10}


@pytest.fixture
def fig2_table():
    return ParityTable.from_rows(FIG2A_ROWS)


@pytest.fixture
def fig1_circuit():
    return Circuit(4).extend_cnots(FIG1_CNOTS)


@pytest.fixture
def grid34():
    return grid(3, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
