"""Shared helpers for the test suite.

Most tests pin small exact values computed once and checked into the
suite; the helpers here only cover the recurring chores of building
wheels on consecutive label blocks and sampling random chains.
"""

import os
import random
import sys

import pytest

from stripconf.cells import cell_complex, enumerate_cells
from stripconf.chains import ChainVector
from stripconf.cycles import Wheel


def wheels_on_blocks(sizes, start=1):
    """Proper wheels on consecutive label blocks: sizes (2,1) -> W(2,1), W(3)."""
    wheels, nxt = [], start
    for n in sizes:
        wheels.append(Wheel(tuple(range(nxt + n - 1, nxt - 1, -1))))
        nxt += n
    return tuple(wheels)


def random_chain(spec, degree, rng, terms=4):
    cells = enumerate_cells(spec, degree)
    if not cells:
        return ChainVector.zero(spec, degree)
    coeffs = {}
    for cell in rng.sample(cells, min(terms, len(cells))):
        coeffs[cell] = rng.choice((-2, -1, 1, 2, 3))
    return ChainVector(spec, degree, coeffs)


@pytest.fixture
def rng():
    return random.Random(20240817)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("RUN_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch computation, enable with RUN_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, immune to output capture."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "_RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for text in lines:
            terminalreporter.write_line(text)
