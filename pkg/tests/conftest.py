import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hybridsched.core import Matching

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def demand_matrices(draw, max_n=4, max_entry=12, min_n=1):
    n = draw(st.integers(min_n, max_n))
    return draw(arrays(np.int64, (n, n), elements=st.integers(0, max_entry)))


@st.composite
def matchings(draw, n):
    perm = draw(st.permutations(range(n)))
    keep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return Matching(tuple((i, j) for i, (j, k) in enumerate(zip(perm, keep)) if k))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
