from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ckc.chain import LinkLengths

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def _closable(a: list[float]) -> bool:
    return 2.0 * max(a) <= math.fsum(a)


@st.composite
def closable_links(draw, min_n: int = 4, max_n: int = 9, lo: float = 0.1, hi: float = 10.0):
    n = draw(st.integers(min_n, max_n))
    a = draw(st.lists(st.floats(lo, hi), min_size=n, max_size=n).filter(_closable))
    return LinkLengths(np.array(a))


@st.composite
def seeds(draw):
    return draw(st.integers(0, 2**32 - 1))


def random_links(rng: np.random.Generator, n: int, lo: float = 0.2, hi: float = 3.0) -> LinkLengths:
    while True:
        a = rng.uniform(lo, hi, n)
        if 2.0 * a.max() <= a.sum():
            return LinkLengths(a)


def three_long_links(rng: np.random.Generator, n: int, descending: bool = True) -> LinkLengths:
    """Three lengths in [1, 2] plus short links that keep b2 + b3 > b1 + rest."""
    big = np.sort(rng.uniform(1.0, 2.0, 3))[::-1]
    room = big[1] + big[2] - big[0]
    small = rng.uniform(0.05, 1.0, n - 3)
    small *= rng.uniform(0.1, 0.95) * room / small.sum()
    a = np.concatenate([big, small])
    if descending:
        a = np.sort(a)[::-1]
    else:
        rng.shuffle(a)
    return LinkLengths(a)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
