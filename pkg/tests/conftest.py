import json
from pathlib import Path

import pytest

from hfhom.band_edge import edge_for
from hfhom.cell_eig import band_table, uniform_kgrid
from hfhom.coefficients import builtin

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def frozen():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture(scope="session")
def cosine():
    return builtin("cosine")


@pytest.fixture(scope="session")
def weighted():
    return builtin("weighted")


@pytest.fixture(scope="session")
def free():
    return builtin("free")


@pytest.fixture(scope="session")
def tables():
    return {name: band_table(builtin(name), uniform_kgrid(257), N=64, l_max=5)
            for name in ("free", "cosine", "weighted")}


@pytest.fixture(scope="session")
def edge_cond1():
    return edge_for(builtin("cosine"), 1, "Cond1")


@pytest.fixture(scope="session")
def edge_cond3():
    return edge_for(builtin("cosine"), 1, "Cond3")


@pytest.fixture(scope="session")
def edge_free():
    return edge_for(builtin("free"), 1, "Cond1", allow_degenerate=True)


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the terminal summary (and stdout)."""
    def _report(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
