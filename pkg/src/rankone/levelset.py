"""Finite unions of tower floors.

A :class:`LevelSet` names a set of floors of one tower (its home stage) as
sorted, disjoint, inclusive integer intervals.  Seen from a deeper tower
J, the same set occupies the levels ``base + O_home + ... + O_{J-1}``
where ``O_t`` are the column offsets of stage t; the sum never produces
duplicates because offsets are at least h_t apart while every summand
lies in [0, h_t).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .tower import StageTable

DEFAULT_CAP = 10**7

Interval = tuple[int, int]


class CapExceeded(RuntimeError):
    pass


def normalize(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort and merge overlapping or adjacent inclusive intervals."""
    out: list[list[int]] = []
    for a, b in sorted(intervals):
        if a > b:
            continue
        if out and a <= out[-1][1] + 1:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def _intersect_intervals(xs: tuple[Interval, ...], ys: tuple[Interval, ...]) -> tuple[Interval, ...]:
    out = []
    i = k = 0
    while i < len(xs) and k < len(ys):
        lo = max(xs[i][0], ys[k][0])
        hi = min(xs[i][1], ys[k][1])
        if lo <= hi:
            out.append((lo, hi))
        if xs[i][1] < ys[k][1]:
            i += 1
        else:
            k += 1
    return tuple(out)


@dataclass(frozen=True)
class LevelSet:
    table: StageTable = field(compare=False, repr=False)
    home: int
    base: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", normalize(self.base))
        if not 1 <= self.home <= self.table.terminal:
            raise ValueError(f"home stage {self.home} outside 1..{self.table.terminal}")
        h = self.table.h(self.home)
        for a, b in self.base:
            if a < 0 or b >= h:
                raise ValueError(f"interval [{a},{b}] outside [0,{h - 1}] of tower {self.home}")

    @property
    def size(self) -> int:
        """Number of floors of the home tower in the set."""
        return sum(b - a + 1 for a, b in self.base)

    def is_empty(self) -> bool:
        return not self.base

    def describe(self) -> str:
        parts = [f"{a}" if a == b else f"{a}-{b}" for a, b in self.base]
        return f"stage {self.home}: {{{', '.join(parts)}}}"


def floor_set(table: StageTable, j: int, intervals: Iterable[Interval]) -> LevelSet:
    return LevelSet(table, j, tuple(intervals))


def tower_set(table: StageTable, j: int) -> LevelSet:
    return LevelSet(table, j, ((0, table.h(j) - 1),))


def column_set(table: StageTable, j: int, i: int, with_spacers: bool = False) -> LevelSet:
    """Column i of tower j, seen in tower j+1; spacers above it optional."""
    r = table.r(j)
    if not 1 <= i <= r:
        raise IndexError(f"column {i} outside 1..{r}")
    start = table.offsets(j)[i - 1]
    top = start + table.h(j) - 1
    if with_spacers:
        top += table.spacers(j)[i - 1]
    return LevelSet(table, j + 1, ((start, top),))


def empty_set(table: StageTable, j: int = 1) -> LevelSet:
    return LevelSet(table, j, ())


def refine(s: LevelSet, J: int, cap: int = DEFAULT_CAP) -> LevelSet:
    """The same subset of X, represented in tower J >= home."""
    if J < s.home:
        raise ValueError(f"cannot refine stage-{s.home} set to shallower stage {J}")
    table = s.table
    base = s.base
    n_levels = s.size
    for t in range(s.home, J):
        offs = table.offsets(t)
        if len(base) * len(offs) > cap:
            raise CapExceeded(f"refinement to stage {J} needs more than {cap} intervals")
        new = [(a + o, b + o) for o in offs for a, b in base]
        base = normalize(new)
        n_levels *= len(offs)
        # Offsets are h_t apart, so the sumset has no collisions.
        assert sum(b - a + 1 for a, b in base) == n_levels
    return LevelSet(table, J, base)


def flatten(s: LevelSet, J: int | None = None, cap: int = DEFAULT_CAP) -> list[int]:
    """Every level of tower J occupied by the set, in increasing order."""
    J = s.home if J is None else J
    table = s.table
    total = s.size
    for t in range(s.home, J):
        total *= table.r(t)
    if total > cap:
        raise CapExceeded(f"flattening to stage {J} gives {total} levels > cap {cap}")
    levels = [l for a, b in s.base for l in range(a, b + 1)]
    for t in range(s.home, J):
        levels = [l + o for o in table.offsets(t) for l in levels]
    return sorted(levels)


def measure(s: LevelSet) -> Fraction:
    return s.size * s.table.w(s.home)


def common_stage(a: LevelSet, b: LevelSet, cap: int = DEFAULT_CAP) -> tuple[LevelSet, LevelSet]:
    J = max(a.home, b.home)
    return refine(a, J, cap), refine(b, J, cap)


def intersect(a: LevelSet, b: LevelSet, cap: int = DEFAULT_CAP) -> LevelSet:
    a, b = common_stage(a, b, cap)
    return LevelSet(a.table, a.home, _intersect_intervals(a.base, b.base))


def union(a: LevelSet, b: LevelSet, cap: int = DEFAULT_CAP) -> LevelSet:
    a, b = common_stage(a, b, cap)
    return LevelSet(a.table, a.home, a.base + b.base)


# --- address grammar -----------------------------------------------------------

_FLOOR = re.compile(r"^(\d+):(\d+)(?:-(\d+))?$")
_COLUMN = re.compile(r"^(col|colsp):(\d+):(\d+)$")
_TOWER = re.compile(r"^tower:(\d+)$")


class AddressError(ValueError):
    pass


def parse_address(table: StageTable, text: str, cap: int = DEFAULT_CAP) -> LevelSet:
    """Parse ``j:l``, ``j:a-b``, ``col:j:i``, ``col+spacers:j:i``, ``tower:j``
    and unions of these joined by ``+``."""
    text = text.replace(" ", "").replace("col+spacers:", "colsp:")
    if not text:
        raise AddressError("empty set address")
    result = None
    for token in text.split("+"):
        try:
            part = _parse_token(table, token)
        except (ValueError, IndexError) as exc:
            raise AddressError(f"bad set address {token!r}: {exc}") from None
        result = part if result is None else union(result, part, cap)
    return result


def _parse_token(table: StageTable, token: str) -> LevelSet:
    if m := _FLOOR.match(token):
        j, a = int(m[1]), int(m[2])
        b = int(m[3]) if m[3] is not None else a
        if b < a:
            raise ValueError(f"empty interval {a}-{b}")
        return floor_set(table, j, [(a, b)])
    if m := _COLUMN.match(token):
        return column_set(table, int(m[2]), int(m[3]), with_spacers=m[1] == "colsp")
    if m := _TOWER.match(token):
        return tower_set(table, int(m[1]))
    raise ValueError("unrecognized form")
