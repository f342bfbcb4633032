import random

import pytest

from ktres.groebner import QuotientRing


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def q3():
    return QuotientRing(3)


def poly(ring, text):
    return ring.parse(text)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
