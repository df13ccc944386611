"""Exact checkers for the correlation lemmas, the Sidon property and the
mixing bound.

Checkers report residuals; they never assume the identity they test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .correlation import CorrelationError, CorrelationResult, ShiftedCombo, correlate, inner, one_plus_shift
from .levelset import LevelSet, column_set, floor_set, measure, tower_set
from .params import ParamSchedule, j_set
from .tensor import TensorVec, lemma3_rhs, tensor_norm2
from .tower import StageTable

EXHAUSTIVE_LIMIT = 10**6


class Unresolved(CorrelationError):
    """A decision needed a correlation the built stages cannot pin down."""


def default_floor(table: StageTable, level: int = 0) -> LevelSet:
    return floor_set(table, 1, [(level, level)])


@dataclass(frozen=True)
class LemmaReport:
    lemma: int
    params: dict = field(compare=False)
    lhs: CorrelationResult
    rhs: CorrelationResult

    @property
    def exact(self) -> bool:
        return self.lhs.exact and self.rhs.exact

    @property
    def residual(self) -> Fraction | None:
        return self.lhs.lo - self.rhs.lo if self.exact else None

    @property
    def holds(self) -> bool:
        return self.exact and self.residual == 0


def lemma1_check(table: StageTable, sched: ParamSchedule, j: int, m: int, A: LevelSet | None = None) -> LemmaReport:
    """(T^{h_j}A, T^{-m}A) against (1/r_j)(A + T^{-s_j(r_j-1)}A, T^{-m}A), m in {0, n}."""
    A = default_floor(table) if A is None else A
    st = sched.stage(j)
    n = st.n
    if m not in (0, n):
        raise ValueError(f"m must be 0 or n={n}, got {m}")
    target = ShiftedCombo.indicator(A, -m)
    lhs = inner(ShiftedCombo.indicator(A, table.h(j)), target)
    rhs = inner(one_plus_shift(A, n), target).scale(Fraction(1, st.r))
    return LemmaReport(1, {"j": j, "r": st.r, "n": n, "m": m}, lhs, rhs)


def lemma2_check(
    table: StageTable, sched: ParamSchedule, r: int, n: int, i: int, j: int, A: LevelSet | None = None
) -> LemmaReport:
    """(T^{h_j}A, T^{h_i}A) against (1/r^2)((I+T^{-n})A, (I+T^{-n})A) for distinct i, j in J(r,n)."""
    if i == j:
        raise ValueError("distinct indices required")
    js = j_set(sched, r, n)
    for x in (i, j):
        if x not in js:
            raise ValueError(f"stage {x} is not in J({r},{n}) = {js}")
    A = default_floor(table) if A is None else A
    lhs = inner(ShiftedCombo.indicator(A, table.h(j)), ShiftedCombo.indicator(A, table.h(i)))
    g = one_plus_shift(A, n)
    rhs = inner(g, g).scale(Fraction(1, r * r))
    return LemmaReport(2, {"r": r, "n": n, "i": i, "j": j}, lhs, rhs)


def lemma3_check(table: StageTable, sched: ParamSchedule, r: int, n: int, A: LevelSet | None = None) -> LemmaReport:
    js = j_set(sched, r, n)
    if not js:
        raise ValueError(f"J({r},{n}) is empty on this schedule")
    A = default_floor(table) if A is None else A
    avg = TensorVec()
    for j in js:
        g = ShiftedCombo.indicator(A, table.h(j))
        avg = avg + TensorVec.elementary(g, g, Fraction(1, len(js)))
    g = one_plus_shift(A, n)
    vec = avg - TensorVec.elementary(g, g, Fraction(1, r * r))
    lhs = tensor_norm2(vec)
    rhs = lemma3_rhs(A, r, n, len(js))
    return LemmaReport(3, {"r": r, "n": n, "J": tuple(js)}, lhs, rhs)


# --- Sidon property ----------------------------------------------------------------


@dataclass(frozen=True)
class SidonReport:
    j: int
    m: int
    touched: tuple[int, ...]
    k: int

    @property
    def count(self) -> int:
        return len(self.touched)

    @property
    def passed(self) -> bool:
        return self.count <= self.k


def sidon_count(table: StageTable, j: int, m: int, k: int = 2) -> SidonReport:
    """Columns i of tower j that meet X_j ∩ T^m X_j in positive measure."""
    if not 1 <= j < table.terminal:
        raise ValueError(f"stage {j} has no columns in this table")
    if not table.h(j) < m <= table.h(j + 1):
        raise ValueError(f"m={m} outside ({table.h(j)}, {table.h(j + 1)}]")
    X = tower_set(table, j)
    touched = []
    for i in range(1, table.r(j) + 1):
        # the column lies inside X_j, so this is mu(X_j ∩ T^m X_j ∩ X_{i,j})
        res = correlate(table, column_set(table, j, i), X, m)
        if res.lo > 0:
            touched.append(i)
        elif not res.exact:
            raise Unresolved(f"column {i}, m={m}: value in [0, {res.hi}]")
    return SidonReport(j, m, tuple(touched), k)


@dataclass(frozen=True)
class SidonScan:
    j: int
    k: int
    scanned: int
    worst: int
    violations: tuple[int, ...]
    unresolved: tuple[int, ...]
    reports: tuple[SidonReport, ...] = field(repr=False, default=())

    @property
    def passed(self) -> bool:
        return not self.violations and not self.unresolved


def sidon_window(table: StageTable, j: int) -> range:
    return range(table.h(j) + 1, table.h(j + 1) + 1)


def sidon_scan(
    table: StageTable,
    j: int,
    k: int = 2,
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int = 0,
    ms: Iterable[int] | None = None,
    keep_reports: bool = False,
) -> SidonScan:
    """Worst Sidon count over the window (h_j, h_{j+1}] or an explicit m list."""
    if ms is None:
        window = sidon_window(table, j)
        if mode == "exhaustive":
            if len(window) > EXHAUSTIVE_LIMIT:
                raise ValueError(f"window has {len(window)} values > {EXHAUSTIVE_LIMIT}; sample instead")
            ms = window
        elif mode == "sample":
            ms = sorted(random.Random(seed).sample(window, min(samples, len(window))))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    worst = 0
    violations, unresolved, reports = [], [], []
    scanned = 0
    for m in ms:
        scanned += 1
        try:
            rep = sidon_count(table, j, m, k)
        except Unresolved:
            unresolved.append(m)
            continue
        worst = max(worst, rep.count)
        if not rep.passed:
            violations.append(m)
        if keep_reports:
            reports.append(rep)
    return SidonScan(j, k, scanned, worst, tuple(violations), tuple(unresolved), tuple(reports))


# --- mixing bound ------------------------------------------------------------------

OK = "ok"
VIOLATION = "violation"
NOT_APPLICABLE = "n/a"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class MixingRow:
    m: int
    value: CorrelationResult
    window: int | None
    bound: Fraction | None
    status: str


def window_of(table: StageTable, m: int) -> int | None:
    """Largest stage j with h_j <= m that still has columns (r_j defined)."""
    j = None
    for t in range(1, table.terminal):
        if table.h(t) <= m:
            j = t
    return j


def mixing_row(table: StageTable, A: LevelSet, B: LevelSet, m: int, k: int = 2) -> MixingRow:
    value = correlate(table, A, B, m)
    j = window_of(table, m)
    home = max(A.home, B.home)
    if j is None or j < home:
        return MixingRow(m, value, j, None, NOT_APPLICABLE if value.exact else UNRESOLVED)
    bound = k * measure(A) / table.r(j)
    if not value.exact:
        status = UNRESOLVED if value.lo <= bound else VIOLATION
    else:
        status = OK if value.lo <= bound else VIOLATION
    return MixingRow(m, value, j, bound, status)


def mixing_profile(
    table: StageTable,
    A: LevelSet,
    B: LevelSet,
    m_from: int,
    m_to: int,
    k: int = 2,
    ms: Sequence[int] | None = None,
) -> list[MixingRow]:
    """mu(A ∩ T^m B) for m in [m_from, m_to], each checked against k mu(A)/r_j
    where h_j <= m < h_{j+1}."""
    ms = range(m_from, m_to + 1) if ms is None else ms
    return [mixing_row(table, A, B, m, k) for m in ms]
