import numpy as np
import pytest

from ghzdiscord.qmatrix import DensityMatrix


def random_density(n, rng, rank=None):
    """Random full-rank (or fixed-rank) density matrix from a Ginibre matrix."""
    d = 2**n
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return DensityMatrix.from_matrix(m / np.trace(m).real)


def random_unitary(rng, d=2):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, shown at the end of every run
ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def criterion():
    def report(key, ok, detail):
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES[key] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES, key=lambda k: (not k.isdigit(), int(k) if k.isdigit() else 0, k)):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
