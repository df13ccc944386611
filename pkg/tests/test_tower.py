from fractions import Fraction

from hypothesis import given

from rankone.params import ParamSchedule, StageParams
from rankone.tower import build_stages, infinite_measure_diagnostic

from conftest import small_schedules
from oracles import brute_heights, stacked_labels


def test_p0_table(p0):
    t = build_stages(p0)
    assert t.heights == (4, 9, 20)
    assert t.offset_table == ((0, 5), (0, 9))
    assert t.widths == (1, Fraction(1, 2), Fraction(1, 4))
    assert t.measures == (4, Fraction(9, 2), 5)


def test_t1_heights_and_offsets(t1):
    t = build_stages(t1)
    assert t.heights == (4, 359, 31954)
    assert t.offsets(1) == (0, 20, 88, 92, 99)


def test_zero_spacers_keep_measure():
    t = build_stages(ParamSchedule(5, (StageParams(3, (0, 0, 0)), StageParams(2, (0, 0)))))
    assert len(set(t.measures)) == 1


def test_base_measure_scales():
    t = build_stages(ParamSchedule(4, (StageParams(2, (1, 0)),)), Fraction(3, 7))
    assert t.mu_tower(2) == Fraction(3, 7) * Fraction(9, 2)


@given(small_schedules(max_stages=3))
def test_heights_match_literal_stacking(sched):
    stages = [(st.r, st.s) for st in sched.stages]
    assert list(build_stages(sched).heights) == brute_heights(sched.h1, stages)


@given(small_schedules(max_stages=3))
def test_offsets_match_literal_stacking(sched):
    t = build_stages(sched)
    stages = [(st.r, st.s) for st in sched.stages]
    for j in range(1, len(sched) + 1):
        labels = stacked_labels(sched.h1, stages, j + 1)
        # column starts are where the base floor of tower j reappears
        starts = tuple(p for p, lab in enumerate(labels) if lab.get(j) == 0)
        assert t.offsets(j) == starts


@given(small_schedules())
def test_table_invariants(sched):
    t = build_stages(sched)
    for j in range(1, t.terminal):
        offs, s, h = t.offsets(j), t.spacers(j), t.h(j)
        assert offs[0] == 0
        assert all(offs[i + 1] == offs[i] + h + s[i] for i in range(len(offs) - 1))
        assert offs[-1] + h + s[-1] == t.h(j + 1)
        assert t.w(j + 1) == t.w(j) / t.r(j) < t.w(j)
        assert t.h(j + 1) * t.w(j + 1) == t.h(j) * t.w(j) + t.w(j + 1) * sum(s)
        assert t.mu_tower(j + 1) == t.h(j + 1) * t.w(j + 1)
        assert t.h(j + 1) >= t.r(j) * t.h(j)


def test_diagnostic_p0(p0):
    total, terms = infinite_measure_diagnostic(p0)
    assert terms == [Fraction(1, 8), Fraction(2, 18)]
    assert total == Fraction(17, 72)


def test_diagnostic_t1(t1):
    total, _ = infinite_measure_diagnostic(t1)
    assert total == Fraction(339, 20) + Fraction(30159, 1795)


def test_diagnostic_zero_spacers():
    total, _ = infinite_measure_diagnostic(ParamSchedule(4, (StageParams(3, (0, 0, 0)),)))
    assert total == 0
