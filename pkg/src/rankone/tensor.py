"""Formal vectors in L2 ⊗ L2 and the averaging experiment.

Inner products of elementary tensors factor, <u⊗v, x⊗y> = <u,x><v,y>, so
every norm below is a finite Gram expansion over set correlations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .correlation import ZERO, CorrelationResult, ShiftedCombo, inner, one_plus_shift
from .levelset import LevelSet, measure
from .params import ParamSchedule, j_set
from .tower import StageTable

FORM_SUM = "sum"
FORM_SQUARE = "square"


@dataclass(frozen=True)
class TensorVec:
    terms: tuple[tuple[Fraction, ShiftedCombo, ShiftedCombo], ...] = ()

    @classmethod
    def elementary(cls, left: ShiftedCombo, right: ShiftedCombo, coef=1) -> TensorVec:
        return cls(((Fraction(coef), left, right),))

    def __add__(self, other: TensorVec) -> TensorVec:
        return TensorVec(self.terms + other.terms)

    def __sub__(self, other: TensorVec) -> TensorVec:
        return self + other.scale(-1)

    def scale(self, c) -> TensorVec:
        return TensorVec(tuple((Fraction(c) * a, l, r) for a, l, r in self.terms))

    def expand(self) -> list[tuple[Fraction, int, int]]:
        """Coefficients of T^k 1_S ⊗ T^l 1_S' after bilinear expansion, as
        (coef, k, l) with like terms merged.  Only meaningful when every
        term is built on a single set."""
        acc: dict[tuple[int, int], Fraction] = {}
        for c, left, right in self.terms:
            for a, k, _ in left.terms:
                for b, l, _ in right.terms:
                    acc[k, l] = acc.get((k, l), Fraction(0)) + c * a * b
        return sorted((v, k, l) for (k, l), v in acc.items() if v != 0)


def tensor_inner(u: TensorVec, v: TensorVec, cache: dict | None = None) -> CorrelationResult:
    cache = {} if cache is None else cache
    total = ZERO
    for c, l, r in u.terms:
        for c2, l2, r2 in v.terms:
            if c == 0 or c2 == 0:
                continue
            total = total + (inner(l, l2, cache=cache) * inner(r, r2, cache=cache)).scale(c * c2)
    return total


def tensor_norm2(u: TensorVec) -> CorrelationResult:
    return tensor_inner(u, u)


def build_F(A: LevelSet, n: int, form: str = FORM_SQUARE) -> TensorVec:
    """The target vectors F_n for f = 1_A.

    ``sum``: T^n f ⊗ f + f ⊗ T^n f.
    ``square``: (I + T^{-n}) f ⊗ (I + T^{-n}) f.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    f = ShiftedCombo.indicator(A)
    if form == FORM_SUM:
        tf = ShiftedCombo.indicator(A, n)
        return TensorVec.elementary(tf, f) + TensorVec.elementary(f, tf)
    if form == FORM_SQUARE:
        g = one_plus_shift(A, n)
        return TensorVec.elementary(g, g)
    raise ValueError(f"unknown form {form!r}")


def build_P_applied(table: StageTable, sched: ParamSchedule, r: int, n: int, A: LevelSet) -> TensorVec:
    """P_{r,n} (1_A ⊗ 1_A): the average of T^{h_j}A ⊗ T^{h_j}A over j in J(r,n)."""
    js = j_set(sched, r, n)
    if not js:
        raise ValueError(f"J({r},{n}) is empty on this schedule")
    c = Fraction(1, len(js))
    out = TensorVec()
    for j in js:
        g = ShiftedCombo.indicator(A, table.h(j))
        out = out + TensorVec.elementary(g, g, c)
    return out


@dataclass(frozen=True)
class ApproxReport:
    r: int
    n: int
    j_size: int
    error2: CorrelationResult
    lemma3_scaled: CorrelationResult
    bound: Fraction

    @property
    def exact(self) -> bool:
        return self.error2.exact and self.lemma3_scaled.exact

    @property
    def agrees(self) -> bool:
        return self.exact and self.error2.lo == self.lemma3_scaled.lo

    @property
    def within_bound(self) -> bool:
        return self.error2.hi <= self.bound


def lemma3_rhs(A: LevelSet, r: int, n: int, j_size: int, cache: dict | None = None) -> CorrelationResult:
    """(1/|J|) ((A,A)^2 - (1/r^4) (A + T^{-n}A, A + T^{-n}A)^2)."""
    f = ShiftedCombo.indicator(A)
    g = one_plus_shift(A, n)
    aa = inner(f, f, cache=cache)
    gg = inner(g, g, cache=cache)
    return (aa * aa - (gg * gg).scale(Fraction(1, r**4))).scale(Fraction(1, j_size))


def approx_error(
    table: StageTable, sched: ParamSchedule, A: LevelSet, r: int, n: int, form: str = FORM_SQUARE
) -> ApproxReport:
    """Squared distance from r^2 P_{r,n}(f⊗f) to F_n, against Lemma-3 and the C r^4/|J| bound.

    The constant C is taken as (A,A)^2.  The Lemma-3 column only matches
    ``error2`` for the ``square`` form of F_n.
    """
    js = j_set(sched, r, n)
    if not js:
        raise ValueError(f"J({r},{n}) is empty on this schedule")
    cache: dict = {}
    diff = build_P_applied(table, sched, r, n, A).scale(r * r) - build_F(A, n, form)
    err2 = tensor_inner(diff, diff, cache)
    scaled = lemma3_rhs(A, r, n, len(js), cache).scale(r**4)
    bound = measure(A) ** 2 * Fraction(r**4, len(js))
    return ApproxReport(r, n, len(js), err2, scaled, bound)
