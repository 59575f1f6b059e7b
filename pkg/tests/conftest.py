import time

import pytest

from semiquasi.chart import make_chart
from semiquasi.corpus import load_corpus

UNIT = (-1.0, 1.0)
SESSION_START = time.monotonic()
ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(items):
    # acceptance runs last so its runtime criterion sees the whole suite
    items.sort(key=lambda item: item.module.__name__ == "test_acceptance")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def schwarzschild():
    return load_corpus("schwarzschild")


@pytest.fixture(scope="session")
def kottler():
    return load_corpus("kottler")


@pytest.fixture(scope="session")
def example3():
    return load_corpus("example3")


@pytest.fixture(scope="session")
def flat():
    """Euclidean 3-space with the unit parallel form dx1."""
    return make_chart(
        "flat",
        ["x1", "x2", "x3"],
        [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        ["1", "0", "0"],
        sample_ranges={"x1": UNIT, "x2": UNIT, "x3": UNIT},
    )


@pytest.fixture(scope="session")
def flat0(flat):
    return flat.with_one_form(["0", "0", "0"], "flat0")


@pytest.fixture(scope="session")
def s2r():
    """Unit 2-sphere times a line; Ric = g - dz x dz = (n-2)(g - pi x pi) for pi = dz."""
    return make_chart(
        "s2r",
        ["theta", "phi", "z"],
        [["1", "0", "0"], ["0", "sin(theta)^2", "0"], ["0", "0", "1"]],
        ["0", "0", "1"],
        sample_ranges={"theta": (0.3, 2.8), "phi": (0.0, 6.0), "z": UNIT},
    )


@pytest.fixture(scope="session")
def nil():
    """Heisenberg group with its unit Killing (not parallel) field."""
    return make_chart(
        "nil",
        ["x", "y", "z"],
        [["1", "0", "0"], ["0", "1 + x^2", "-x"], ["0", "-x", "1"]],
        ["0", "-x", "1"],
        sample_ranges={"x": UNIT, "y": UNIT, "z": UNIT},
    )


@pytest.fixture(scope="session")
def s3():
    return make_chart(
        "s3",
        ["chi", "theta", "phi"],
        [["1", "0", "0"], ["0", "sin(chi)^2", "0"], ["0", "0", "sin(chi)^2*sin(theta)^2"]],
        ["1", "0", "0"],
        sample_ranges={"chi": (0.3, 2.8), "theta": (0.3, 2.8), "phi": (0.0, 6.0)},
    )


@pytest.fixture(scope="session")
def sphere():
    return make_chart(
        "sphere",
        ["theta", "phi"],
        [["1", "0"], ["0", "sin(theta)^2"]],
        sample_ranges={"theta": (0.3, 2.8), "phi": (0.0, 6.0)},
    )
