"""Exact set correlations mu(A ∩ T^m B).

Both sets are viewed in the deepest tower K the table knows.  There, a
level l of B with l + m < h_K is carried by T^m to level l + m, so

    mu(A ∩ T^m B) >= w_K * #{(a, b) in A_K x B_K : a - b = m}

and the levels of B with l + m >= h_K leave the tower; their mass is the
``unresolved`` part.  Since A_K and B_K are sumsets over the stage offsets,
the pair count is computed top-down on the displacement d, one stage at a
time, memoized on (stage, d).  At most two offset pairs keep each
displacement inside the next tower down, so the recursion stays small.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .levelset import DEFAULT_CAP, LevelSet, common_stage, flatten
from .tower import StageTable


class CorrelationError(RuntimeError):
    pass


class ShallowStage(CorrelationError):
    pass


@dataclass(frozen=True)
class CorrelationResult:
    """An exact value known to lie in [lo, lo + unresolved]."""

    lo: Fraction
    unresolved: Fraction = Fraction(0)

    @property
    def exact(self) -> bool:
        return self.unresolved == 0

    @property
    def hi(self) -> Fraction:
        return self.lo + self.unresolved

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise CorrelationError(f"value only known to lie in [{self.lo}, {self.hi}]")
        return self.lo

    @classmethod
    def between(cls, lo, hi) -> CorrelationResult:
        return cls(Fraction(lo), Fraction(hi) - Fraction(lo))

    def __add__(self, other: CorrelationResult) -> CorrelationResult:
        return CorrelationResult(self.lo + other.lo, self.unresolved + other.unresolved)

    def __sub__(self, other: CorrelationResult) -> CorrelationResult:
        return self + other.scale(-1)

    def scale(self, c) -> CorrelationResult:
        a, b = c * self.lo, c * self.hi
        return CorrelationResult.between(min(a, b), max(a, b))

    def __mul__(self, other: CorrelationResult) -> CorrelationResult:
        if self.exact and other.exact:
            return CorrelationResult(self.lo * other.lo)
        ps = [x * y for x in (self.lo, self.hi) for y in (other.lo, other.hi)]
        return CorrelationResult.between(min(ps), max(ps))

    def square(self) -> CorrelationResult:
        if self.lo >= 0:
            return CorrelationResult.between(self.lo**2, self.hi**2)
        if self.hi <= 0:
            return CorrelationResult.between(self.hi**2, self.lo**2)
        return CorrelationResult.between(0, max(self.lo**2, self.hi**2))


ZERO = CorrelationResult(Fraction(0))


def _base_pair_count(A: tuple, B: tuple, d: int) -> int:
    """#{(a, b) in A x B : a - b = d} for interval lists A, B."""
    total = 0
    for a1, a2 in A:
        for b1, b2 in B:
            lo = max(b1, a1 - d)
            hi = min(b2, a2 - d)
            if hi >= lo:
                total += hi - lo + 1
    return total


def pair_count(A: LevelSet, B: LevelSet, d: int, K: int) -> int:
    """Number of level pairs (a, b) of tower K with a in A, b in B, a - b = d.

    A and B must share a home stage <= K.
    """
    if A.home != B.home:
        raise ValueError("sets must share a home stage")
    table = A.table
    home = A.home
    abase, bbase = A.base, B.base

    @lru_cache(maxsize=None)
    def count(t: int, d: int) -> int:
        if abs(d) >= table.h(t):
            return 0
        if t == home:
            return _base_pair_count(abase, bbase, d)
        offs = table.offsets(t - 1)
        h = table.h(t - 1)
        total = 0
        for oa in offs:
            # need |d - oa + ob| < h, i.e. oa - d - h < ob < oa - d + h
            lo = bisect_right(offs, oa - d - h)
            hi = bisect_left(offs, oa - d + h)
            for k in range(lo, hi):
                total += count(t - 1, d - oa + offs[k])
        return total

    return count(K, d)


def count_at_least(B: LevelSet, c: int, K: int) -> int:
    """#{levels b of B in tower K with b >= c}."""
    table = B.table
    home = B.home

    def count(t: int, c: int) -> int:
        if c <= 0:
            size = B.size
            for u in range(home, t):
                size *= table.r(u)
            return size
        if c >= table.h(t):
            return 0
        if t == home:
            return sum(b - max(a, c) + 1 for a, b in B.base if b >= c)
        return sum(count(t - 1, c - o) for o in table.offsets(t - 1))

    return count(K, c)


def correlate(
    table: StageTable,
    A: LevelSet,
    B: LevelSet,
    m: int,
    stage: int | None = None,
    cap: int = DEFAULT_CAP,
) -> CorrelationResult:
    """mu(A ∩ T^m B), resolved as deep as ``stage`` (default: deepest tower)."""
    if m < 0:
        return correlate(table, B, A, -m, stage, cap)
    K = table.terminal if stage is None else stage
    if not 1 <= K <= table.terminal:
        raise CorrelationError(f"stage {K} is not built (1..{table.terminal})")
    if table.h(K) <= m:
        raise CorrelationError(f"no built stage with height > m={m} (h_{K}={table.h(K)})")
    if A.is_empty() or B.is_empty():
        return ZERO
    A, B = common_stage(A, B, cap)
    if A.home > K:
        raise CorrelationError(f"sets live in tower {A.home}, deeper than stage {K}")
    w = table.w(K)
    hits = pair_count(A, B, m, K)
    exits = count_at_least(B, table.h(K) - m, K) if m > 0 else 0
    return CorrelationResult(hits * w, exits * w)


def oracle_correlate(
    table: StageTable, A: LevelSet, B: LevelSet, m: int, J: int, cap: int = DEFAULT_CAP
) -> Fraction:
    """Brute force: list every level of both sets in tower J and shift B by m.

    Requires every shifted level of B to stay inside tower J.
    """
    if max(A.home, B.home) > J:
        raise ShallowStage(f"sets live deeper than stage {J}")
    alevels = set(flatten(A, J, cap))
    h = table.h(J)
    hits = 0
    for l in flatten(B, J, cap):
        if not 0 <= l + m < h:
            raise ShallowStage(f"stage too shallow: level {l} + {m} leaves tower {J}")
        hits += (l + m) in alevels
    return hits * table.w(J)


def oracle_bounds(
    table: StageTable, A: LevelSet, B: LevelSet, m: int, J: int, cap: int = DEFAULT_CAP
) -> CorrelationResult:
    """Brute-force lower bound and escaped mass at stage J (m >= 0)."""
    if m < 0:
        raise ValueError("oracle_bounds takes m >= 0")
    alevels = set(flatten(A, J, cap))
    h = table.h(J)
    hits = escaped = 0
    for l in flatten(B, J, cap):
        if l + m >= h:
            escaped += 1
        elif l + m in alevels:
            hits += 1
    return CorrelationResult(hits * table.w(J), escaped * table.w(J))


# --- shifted indicator combinations ----------------------------------------------


@dataclass(frozen=True)
class ShiftedCombo:
    """Formal sum of c * T^k 1_S, with T^k 1_S the indicator of T^k S."""

    terms: tuple[tuple[Fraction, int, LevelSet], ...] = ()

    @classmethod
    def indicator(cls, s: LevelSet, shift: int = 0, coef=1) -> ShiftedCombo:
        return cls(((Fraction(coef), shift, s),))

    def __add__(self, other: ShiftedCombo) -> ShiftedCombo:
        return ShiftedCombo(self.terms + other.terms)

    def __sub__(self, other: ShiftedCombo) -> ShiftedCombo:
        return self + other.scale(-1)

    def scale(self, c) -> ShiftedCombo:
        return ShiftedCombo(tuple((Fraction(c) * a, k, s) for a, k, s in self.terms))

    def shift(self, k: int) -> ShiftedCombo:
        return ShiftedCombo(tuple((a, k + k0, s) for a, k0, s in self.terms))


def one_plus_shift(s: LevelSet, n: int) -> ShiftedCombo:
    """(I + T^{-n}) 1_S."""
    return ShiftedCombo.indicator(s) + ShiftedCombo.indicator(s, -n)


def inner(
    u: ShiftedCombo,
    v: ShiftedCombo,
    table: StageTable | None = None,
    cache: dict | None = None,
) -> CorrelationResult:
    """<u, v> in L2(mu), expanded bilinearly.

    <T^k 1_S, T^l 1_S'> = mu(S ∩ T^(l-k) S'), by invariance of mu.
    """
    total = ZERO
    for c, k, s in u.terms:
        for c2, l, s2 in v.terms:
            if c == 0 or c2 == 0:
                continue
            key = (s, s2, l - k)
            val = None if cache is None else cache.get(key)
            if val is None:
                val = correlate(table or s.table, s, s2, l - k)
                if cache is not None:
                    cache[key] = val
            total = total + val.scale(c * c2)
    return total


def correlate_many(
    table: StageTable, A: LevelSet, B: LevelSet, ms: Iterable[int]
) -> list[tuple[int, CorrelationResult]]:
    return [(m, correlate(table, A, B, m)) for m in ms]
