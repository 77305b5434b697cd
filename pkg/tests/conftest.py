import pytest

from refined_tr.algebra import Q
from refined_tr.curves import build_curve
from refined_tr.recursion import OmegaTable

WEBER = ("Weber", Q(2), Q(3), Q(1, 3), Q(3, 5))
WHITTAKER = ("Whittaker", Q(2), Q(5), Q(1, 3), Q(3, 5))
AIRY = ("Airy", Q(2), None, Q(0), Q(1, 2))
DBES = ("DegenerateBessel", Q(3, 2), None, Q(0), Q(1, 2))


def _table(args):
    return OmegaTable(build_curve(*args))


@pytest.fixture(scope="session")
def weber():
    return _table(WEBER)


@pytest.fixture(scope="session")
def whittaker():
    return _table(WHITTAKER)


@pytest.fixture(scope="session")
def airy():
    return _table(AIRY)


@pytest.fixture(scope="session")
def dbes():
    return _table(DBES)


@pytest.fixture(scope="session")
def tables(weber, whittaker, airy, dbes):
    return {"Weber": weber, "Whittaker": whittaker, "Airy": airy, "DegenerateBessel": dbes}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
