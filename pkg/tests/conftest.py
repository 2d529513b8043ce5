import numpy as np
import pytest
from hypothesis import settings, strategies as st

from eofkit.separability import random_density

settings.register_profile("default", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small_dims = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3), (1, 2), (2, 1)])


@st.composite
def states(draw, dims=small_dims):
    d = draw(dims) if not isinstance(dims, tuple) else dims
    rank = draw(st.integers(1, d[0] * d[1]))
    return random_density(d, rank, draw(seeds))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance reporting: one PASS/FAIL line per criterion-marked test

_criteria: dict[int, tuple[str, bool, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    ok = rep.passed and _criteria.get(number, ("", True, 0.0))[1]
    _criteria[number] = (title, ok, call.duration + _criteria.get(number, ("", True, 0.0))[2])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, seconds = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f} s)")
