import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from buildings.atlas import BPoint, star, thin  # noqa: E402
from buildings.lambda_core import Q, Z  # noqa: E402
from buildings.model_space import Point  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def star3():
    return star("A1", "Z", 3)


@pytest.fixture(scope="session")
def star_a2():
    return star("A2", "Q", 3)


@pytest.fixture(scope="session")
def thin_a2():
    return thin("A2", "Q")


def p1(chart, v):
    """Rank-one integer point helper."""
    return BPoint(chart, Point([Z(v)]))


def p2(chart, a, b, spec=Q):
    return BPoint(chart, Point([spec(a), spec(b)]))
