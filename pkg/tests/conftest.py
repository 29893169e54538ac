import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monoca.monoid import cyclic, flip_flop, map_monoid, trivial, u1  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def z3():
    return cyclic(3)


@pytest.fixture
def z4():
    return cyclic(4)


@pytest.fixture
def map2():
    return map_monoid(2)


@pytest.fixture
def small_named():
    return [trivial(), u1(), cyclic(2), cyclic(3), cyclic(4), flip_flop(), map_monoid(2)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
