import numpy as np
import pytest


def ginibre(rng, n, m=None):
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_normal(rng, n):
    Q, _ = np.linalg.qr(ginibre(rng, n))
    lam = ginibre(rng, n, 1).ravel() * 2
    return Q @ np.diag(lam) @ Q.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# the 3x3 example with two inequivalent Schur decompositions
TWO_SCHUR_A = np.array([[2, 2, 2], [0, 0, 2], [0, 0, 0]], dtype=complex)
TWO_SCHUR_D1 = np.diag([2, 0, 0]).astype(complex)
TWO_SCHUR_N1 = np.array([[0, 2, 2], [0, 0, 2], [0, 0, 0]], dtype=complex)
TWO_SCHUR_D2 = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]], dtype=complex)
TWO_SCHUR_N2 = np.array([[1, 1, 2], [-1, -1, 2], [0, 0, 0]], dtype=complex)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
