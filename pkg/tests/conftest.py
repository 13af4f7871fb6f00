import numpy as np
import pytest

from pinlab.graph import Graph
from pinlab.spectral import AUDIT

VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[VERDICTS] = []


def pytest_collection_modifyitems(session, config, items):
    # acceptance last: the bound criterion reads the audit of everything before it
    items.sort(key=lambda it: ("test_acceptance" in it.nodeid, "bound_holds_everywhere" in it.nodeid))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
    terminalreporter.write_line(f"eigenvalue bound audit: {AUDIT.summary()}")


@pytest.fixture
def verdict(request, capsys):
    """Record and print one PASS/FAIL line per acceptance criterion."""

    def report(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        request.config.stash[VERDICTS].append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return report


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def degrees_123():
    # not graphical on three nodes; only meaningful for the annealed model
    return np.array([1, 2, 3])
