from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from ultrapath.fixtures import fixture_spaces, t3
from ultrapath.generators import random_ultrametric


@pytest.fixture
def T3():
    return t3()


@pytest.fixture(scope="session")
def corpus():
    return fixture_spaces()


@st.composite
def ultra_spaces(draw, max_n: int = 7, values=(1, 2, 3, 5)):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 10 ** 6))
    return random_ultrametric(random.Random(seed), n, list(values))
