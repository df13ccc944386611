import pytest
from hypothesis import strategies as st

from rankone.params import ParamSchedule, StageParams, generate_t2_min
from rankone.tower import build_stages

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_p0():
    return ParamSchedule(4, (StageParams(2, (1, 0)), StageParams(2, (0, 2))))


def make_t1():
    return ParamSchedule(4, (StageParams(5, (16, 64, 0, 3, 256)), StageParams(5, (1436, 5744, 0, 3, 22976))))


@pytest.fixture
def p0():
    return make_p0()


@pytest.fixture
def t1():
    return make_t1()


@pytest.fixture
def p0_table(p0):
    return build_stages(p0)


@pytest.fixture
def t1_table(t1):
    return build_stages(t1)


@pytest.fixture(scope="session")
def t1_deep_table():
    """T1 with a third (5, 3) stage, so correlations up to h_3 resolve."""
    return build_stages(generate_t2_min(4, [(5, 3)] * 3))


@st.composite
def small_schedules(draw, max_stages=4, max_r=4, max_s=8):
    h1 = draw(st.integers(4, 6))
    n = draw(st.integers(1, max_stages))
    stages = []
    for _ in range(n):
        r = draw(st.integers(2, max_r))
        s = draw(st.lists(st.integers(0, max_s), min_size=r, max_size=r))
        stages.append(StageParams(r, tuple(s)))
    return ParamSchedule(h1, tuple(stages))
