from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankone.correlation import ShiftedCombo, one_plus_shift
from rankone.levelset import empty_set, flatten, floor_set
from rankone.params import ParamSchedule, StageParams, generate_t2_min
from rankone.tensor import (
    FORM_SUM,
    FORM_SQUARE,
    TensorVec,
    approx_error,
    build_F,
    build_P_applied,
    tensor_inner,
    tensor_norm2,
)
from rankone.tower import build_stages



@pytest.fixture
def A(t1_table):
    return floor_set(t1_table, 1, [(0, 0)])


def test_inner_examples(A):
    f = ShiftedCombo.indicator(A)
    ff = TensorVec.elementary(f, f)
    assert tensor_inner(ff, ff).value == 1
    g = one_plus_shift(A, 3)
    assert tensor_inner(ff, TensorVec.elementary(g, g)).value == 1


def test_build_F_forms(A):
    assert build_F(A, 0, FORM_SQUARE).expand() == [(4, 0, 0)]
    assert build_F(A, 0, FORM_SUM).expand() == [(2, 0, 0)]
    assert build_F(A, 3, FORM_SQUARE).expand() == [(1, -3, -3), (1, -3, 0), (1, 0, -3), (1, 0, 0)]
    assert build_F(A, 3, FORM_SUM).expand() == [(1, 0, 3), (1, 3, 0)]
    with pytest.raises(ValueError):
        build_F(A, -1)


def test_build_P_applied(t1, t1_table, A):
    P = build_P_applied(t1_table, t1, 5, 3, A)
    # J(5,3) = {1, 2}: shifts by h_1 = 4 and h_2 = 359
    assert P.expand() == [(Fraction(1, 2), 4, 4), (Fraction(1, 2), 359, 359)]
    one = generate_t2_min(4, [(5, 3)])
    assert build_P_applied(build_stages(one), one, 5, 3, A).expand() == [(1, 4, 4)]
    with pytest.raises(ValueError):
        build_P_applied(t1_table, t1, 5, 4, A)


def test_approx_error_t1(t1, t1_table, A):
    rep = approx_error(t1_table, t1, A, 5, 3)
    assert rep.error2.value == Fraction(621, 2)
    assert rep.lemma3_scaled.value == Fraction(621, 2)
    assert rep.bound == Fraction(625, 2)
    assert rep.agrees and rep.within_bound


def test_approx_error_halves_when_J_doubles():
    values = {}
    for count in (1, 2, 4):
        sched = generate_t2_min(4, [(5, 3)] * count)
        t = build_stages(sched)
        values[count] = approx_error(t, sched, floor_set(t, 1, [(0, 0)]), 5, 3).error2.value
    assert values[2] == values[1] / 2
    assert values[4] == values[2] / 2


def test_empty_set_gives_zero(t1, t1_table):
    rep = approx_error(t1_table, t1, empty_set(t1_table), 5, 3)
    assert rep.error2.value == 0 == rep.lemma3_scaled.value


def test_zero_vector_has_zero_norm(A):
    g = one_plus_shift(A, 3)
    v = TensorVec.elementary(g, g)
    assert tensor_norm2(v - v).value == 0
    assert tensor_norm2(v).value > 0


def _product_space_inner(table, K, u_terms, v_terms):
    """<u, v> for sums of c * 1_{T^a S} ⊗ 1_{T^b S'} by counting level pairs of tower K^2."""
    w2 = table.w(K) ** 2

    def pushed(S, k):
        return {l + k for l in flatten(S, K)}

    total = Fraction(0)
    for c, a, S1, b, S2 in u_terms:
        for c2, a2, S3, b2, S4 in v_terms:
            left = pushed(S1, a) & pushed(S3, a2)
            right = pushed(S2, b) & pushed(S4, b2)
            total += c * c2 * len(left) * len(right) * w2
    return total


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=3),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=3))
def test_factorization_matches_product_space(us, vs):
    # tall top spacers keep every pushed level inside tower 3
    p0_table = build_stages(ParamSchedule(4, (StageParams(2, (1, 8)), StageParams(2, (0, 8)))))
    S = floor_set(p0_table, 1, [(0, 1)])
    Sp = floor_set(p0_table, 1, [(2, 2)])

    def build(spec):
        vec, raw = TensorVec(), []
        for c, a, b in spec:
            vec = vec + TensorVec.elementary(ShiftedCombo.indicator(S, a), ShiftedCombo.indicator(Sp, b), c)
            raw.append((Fraction(c), a, S, b, Sp))
        return vec, raw

    u, ur = build(us)
    v, vr = build(vs)
    res = tensor_inner(u, v)
    assert res.exact
    assert res.value == _product_space_inner(p0_table, 3, ur, vr)
    assert res == tensor_inner(v, u)
