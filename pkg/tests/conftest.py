import numpy as np
import pytest

from movingdecay.spectral import bw_construct


@pytest.fixture(scope="session")
def bw():
    """BW(m=1, gamma=0.01) with the default cutoff."""
    return bw_construct(1.0, 0.01)


def lorentzian(mu, m, width):
    return (width / (2 * np.pi)) / ((mu - m) ** 2 + width * width / 4)


def riemann(f, a, b, n, chunk=10**6):
    """Plain midpoint sum; independent of the package's oracle."""
    h = (b - a) / n
    total = 0.0
    for start in range(0, n, chunk):
        x = a + (np.arange(start, min(start + chunk, n)) + 0.5) * h
        total = total + np.sum(f(x))
    return total * h


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Collect one acceptance line; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
