import numpy as np
import pytest
from scipy.stats import unitary_group


def random_unitary(rng, dim=2):
    return unitary_group.rvs(dim, random_state=rng)


def full_operator(gate, q, n):
    """Dense I⊗...⊗U⊗...⊗I with qubit 0 leftmost, built independently of the simulator."""
    ops = [np.eye(2)] * n
    ops[q] = gate
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
