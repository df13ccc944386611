from fractions import Fraction

import pytest
from hypothesis import given, settings

from rankone.levelset import floor_set
from rankone.params import ParamSchedule, StageParams, generate_t2_min
from rankone.tower import build_stages
from rankone.verify import (
    NOT_APPLICABLE,
    OK,
    Unresolved,
    default_floor,
    lemma1_check,
    lemma2_check,
    lemma3_check,
    mixing_profile,
    sidon_count,
    sidon_scan,
)

from conftest import small_schedules
from oracles import stacked_labels


def test_lemma1_t1(t1, t1_table):
    for m in (0, 3):
        rep = lemma1_check(t1_table, t1, 1, m)
        assert rep.exact and rep.residual == 0
    with pytest.raises(ValueError):
        lemma1_check(t1_table, t1, 1, 2)


def test_lemma1_p0_reports_without_judging(p0, p0_table):
    rep = lemma1_check(p0_table, p0, 1, 0)
    assert rep.exact
    assert rep.residual == rep.lhs.lo - rep.rhs.lo


def test_lemma2_t1(t1, t1_table):
    rep = lemma2_check(t1_table, t1, 5, 3, 1, 2)
    assert rep.lhs.value == rep.rhs.value == Fraction(2, 25)
    assert rep.residual == 0


def test_lemma2_argument_errors(t1, t1_table):
    with pytest.raises(ValueError, match="distinct"):
        lemma2_check(t1_table, t1, 5, 3, 1, 1)
    with pytest.raises(ValueError, match="not in J"):
        lemma2_check(t1_table, t1, 6, 3, 1, 2)


def test_lemma3_t1(t1, t1_table):
    rep = lemma3_check(t1_table, t1, 5, 3)
    assert rep.lhs.value == rep.rhs.value == Fraction(621, 1250)


def test_lemma3_single_stage():
    sched = generate_t2_min(4, [(5, 3)])
    rep = lemma3_check(build_stages(sched), sched, 5, 3)
    assert rep.holds


def test_lemma3_empty_set(t1, t1_table):
    rep = lemma3_check(t1_table, t1, 5, 3, floor_set(t1_table, 1, []))
    assert rep.lhs.value == rep.rhs.value == 0


def brute_sidon(sched, j, m, K):
    """Touched columns of stage j and columns that cannot be decided, by stepping tower K."""
    stages = [(s.r, s.s) for s in sched.stages]
    labels = stacked_labels(sched.h1, stages, K)
    nxt = stacked_labels(sched.h1, stages, j + 1)
    starts = [p for p, lab in enumerate(nxt) if lab.get(j) == 0]
    h = len(labels)

    def column(p):
        pos = labels[p][j + 1]
        return max(i for i, s in enumerate(starts, start=1) if s <= pos)

    touched, unsure = set(), set()
    for p, lab in enumerate(labels):
        if j not in lab:
            continue
        if p + m >= h:
            unsure.update(range(1, len(starts) + 1))
        elif j in labels[p + m]:
            touched.add(column(p + m))
    return touched, unsure - touched


def test_sidon_p0_m5(p0, p0_table):
    rep = sidon_count(p0_table, 1, 5)
    assert rep.touched == (1, 2) and rep.count == 2
    touched, _ = brute_sidon(p0, 1, 5, 3)
    assert touched == {1, 2}


def test_sidon_p0_window(p0, p0_table):
    scan = sidon_scan(p0_table, 1, keep_reports=True)
    assert scan.worst == 2 and scan.passed
    for rep in scan.reports:
        assert set(rep.touched) == brute_sidon(p0, 1, rep.m, 3)[0]


def test_sidon_empty_intersection():
    # huge spacers: m just above h_1 sends X_1 into spacer levels only
    sched = ParamSchedule(4, (StageParams(2, (100, 100)), StageParams(2, (500, 500))))
    rep = sidon_count(build_stages(sched), 1, 5)
    assert rep.count == 0


def test_sidon_range_check(p0_table):
    with pytest.raises(ValueError):
        sidon_count(p0_table, 1, 4)


def test_sidon_vacuous(t1_table):
    assert sidon_scan(t1_table, 1, ms=[]).passed


@settings(max_examples=25, deadline=None)
@given(small_schedules(max_stages=3))
def test_sidon_matches_brute(sched):
    t = build_stages(sched)
    if t.terminal < 3:
        return
    for m in range(t.h(1) + 1, t.h(2) + 1):
        touched, unsure = brute_sidon(sched, 1, m, t.terminal)
        try:
            rep = sidon_count(t, 1, m)
        except Unresolved:
            assert unsure
            continue
        assert set(rep.touched) == touched


def test_sidon_deeper_stage_invariance(t1_table, t1_deep_table):
    for m in (10, 100, 300, 355):
        assert sidon_count(t1_table, 1, m) == sidon_count(t1_deep_table, 1, m)


@pytest.mark.parametrize("pairs", [[(5, 3)] * 3, [(5, 5)] * 2, [(6, 2)] * 2, [(6, 6)] * 2])
def test_sidon_violations_confined_to_window_tail(pairs):
    """All columns meet X_j ∩ T^m X_j once m is within h_j of h_{j+1}.

    With s_{j+1}(r-2) = 0 the stage-(j+1) map T^{h_{j+1}} carries one copy of
    X_j onto the next, so the last h_j values of every window touch every
    column.  Away from the tail occupied by the last three columns the
    count never exceeds 2.
    """
    sched = generate_t2_min(4, pairs)
    t = build_stages(sched)
    j = 1
    h, h_next, offs = t.h(j), t.h(j + 1), t.offsets(j)
    scan = sidon_scan(t, j, keep_reports=True)
    counts = {rep.m: rep.count for rep in scan.reports}
    assert all(counts[m] == t.r(j) for m in range(h_next - h + 1, h_next + 1))
    tail = offs[-1] - offs[-3] + h
    assert all(m > h_next - tail for m in scan.violations)


def test_mixing_t1_window(t1_deep_table):
    t = t1_deep_table
    A = default_floor(t)
    rows = mixing_profile(t, A, A, 359, 400)
    assert all(r.status == OK and r.value.lo <= Fraction(2, 5) for r in rows)


def test_mixing_small_m(t1_table):
    A = default_floor(t1_table)
    (row,) = mixing_profile(t1_table, A, A, 0, 0)
    assert row.value.value == 1 and row.status == NOT_APPLICABLE


def test_mixing_p0(p0_table):
    A = default_floor(p0_table)
    (row,) = mixing_profile(p0_table, A, A, 5, 5)
    assert row.value.value == Fraction(1, 2)


def test_mixing_other_floor(t1_deep_table):
    t = t1_deep_table
    A, B = default_floor(t), floor_set(t, 1, [(2, 3)])
    rows = mixing_profile(t, A, B, 4, 359)
    assert all(r.status == OK for r in rows)
