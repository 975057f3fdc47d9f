import numpy as np
import pytest

from shorted.subspaces import Subspace


def rand_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def rand_unitary(rng, n):
    q, r = np.linalg.qr(rand_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_subspace(rng, ambient, dim):
    return Subspace(rand_unitary(rng, ambient)[:, :dim])


def rand_low_rank(rng, rows, cols, rank):
    return rand_complex(rng, rows, rank) @ rand_complex(rng, rank, cols)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


E1 = np.array([[1.0], [0.0]])
T_2X2 = np.array([[1.0, 2.0], [3.0, 6.0]])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
