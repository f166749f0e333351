import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spcompact.lattice import boolean_square, chain, diamond_m3, kleene_square, product  # noqa: E402
from spcompact.lsets import Space  # noqa: E402
from spcompact.topology import LTopology  # noqa: E402

FIXTURE_LATTICES = {
    "L2": chain(2),
    "L3": chain(3),
    "L4": chain(4),
    "L5": chain(5),
    "D4": boolean_square(),
    "L3xL2": product(chain(3), chain(2)),
}


@pytest.fixture(params=sorted(FIXTURE_LATTICES))
def fixture_lattice(request):
    return FIXTURE_LATTICES[request.param]


@pytest.fixture
def L2():
    return chain(2)


@pytest.fixture
def L3():
    return chain(3)


@pytest.fixture
def D4():
    return boolean_square()


@pytest.fixture
def D4K():
    return kleene_square()


@pytest.fixture
def M3():
    return diamond_m3()


@pytest.fixture
def tau0():
    """L2 over {x, y} with opens {⊥̲, χ{x}, ⊤̲}."""
    S = Space(chain(2), ["x", "y"])
    return LTopology.from_lsets(S, [S.constant(0), S.crisp("x"), S.constant(1)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
