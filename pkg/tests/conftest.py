import pytest

from torsionnorm.randoms import commutative_ring, rng, twisted_ring

ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    """Remember the outcome of an acceptance criterion for the summary."""
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def r():
    return rng()


@pytest.fixture(scope="session")
def R2():
    return commutative_ring(2)


@pytest.fixture(scope="session")
def W1():
    return twisted_ring(1)


@pytest.fixture(scope="session")
def W2():
    return twisted_ring(2)


@pytest.fixture(scope="session")
def acceptance():
    return record
