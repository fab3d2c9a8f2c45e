import numpy as np
import pytest
from hypothesis import strategies as st

from lpreduce import new_point_set
from lpreduce.gen import random_simple

CORPUS_SIZE = 1000


@pytest.fixture(scope="session")
def corpus():
    """The 1000 random simple-function point sets shared by several checks."""
    return [random_simple(seed) for seed in range(CORPUS_SIZE)]


@st.composite
def point_sets(draw, max_n=8, max_m=8, ps=(1.0, 1.5, 2.0, 3.0)):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    p = draw(st.sampled_from(ps))
    raw = draw(st.lists(st.floats(0.01, 1.0), min_size=m, max_size=m))
    w = np.array(raw) / sum(raw)
    vals = draw(st.lists(st.floats(-10, 10, allow_nan=False, allow_infinity=False),
                         min_size=n * m, max_size=n * m))
    return new_point_set(p, w, np.array(vals).reshape(n, m))


# acceptance outcomes, printed once at the end of the run
_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    def record(number: int, ok: bool, detail: str):
        _ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
