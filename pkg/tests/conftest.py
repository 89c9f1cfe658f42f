import pytest

from starsim.core_model import SparseHermitian
from starsim.oracle import BlackBox

# Edge weights of the worked 4-cycle: H[x, y] for x < y.
W01 = 0.5 + 0.25j
W03 = -0.75 + 0.1j
W12 = 0.3 - 0.6j
W23 = 1.0 + 0.0j

ACCEPTANCE_RESULTS = []


def record_acceptance(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((criterion, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")


@pytest.fixture
def cycle4() -> SparseHermitian:
    """N=4 cycle 0-1-2-3-0; every row lists neighbors in increasing label order."""
    return SparseHermitian.from_edges(4, [(0, 1, W01), (0, 3, W03), (1, 2, W12), (2, 3, W23)])


@pytest.fixture
def cycle4_oracle(cycle4) -> BlackBox:
    return BlackBox(cycle4)
