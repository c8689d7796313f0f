import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from qdg.generators import random_diagram
from qdg.presentation import QV_BASE, V_BASE

settings.register_profile(
    "qdg", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qdg")

seeds = st.integers(min_value=0, max_value=2**31 - 1)


@st.composite
def diagrams(draw, presentation=QV_BASE, max_transistors=10, tops=("x", "xax", "xx")):
    seed = draw(seeds)
    top = draw(st.sampled_from([t for t in tops if set(t) <= set(presentation.generators)]))
    return random_diagram(random.Random(seed), max_transistors, presentation, top)


@pytest.fixture
def qv_pres():
    return QV_BASE


@pytest.fixture
def v_pres():
    return V_BASE
