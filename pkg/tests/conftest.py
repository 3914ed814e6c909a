import pytest

from agx.core import symmetric_closure
from agx.families import build

FAMILY_TAGS = ["adding", "omega:0", "omega:1", "omega:01", "hanoi:3", "hanoi:4", "nonpoly_b"]


@pytest.fixture(scope="session")
def adding():
    return build("adding")


@pytest.fixture(scope="session")
def omega0():
    return build("omega:0")


@pytest.fixture(scope="session")
def hanoi3():
    return build("hanoi:3")


@pytest.fixture(scope="session")
def hanoi4():
    return build("hanoi:4")


@pytest.fixture(scope="session")
def bauto():
    return build("nonpoly_b")


def peg_word(text):
    """Hanoi words are written with pegs 1..k; letters are pegs minus one."""
    return tuple(int(c) - 1 for c in text)


def sym_word(a, *names):
    """Positive word over the symmetric closure of ``a`` from state names."""
    m = symmetric_closure(a).automaton
    return tuple(m.names.index(n) for n in names)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
