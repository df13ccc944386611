"""Exact per-stage geometry of a cutting-and-stacking construction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .params import ParamSchedule


@dataclass(frozen=True, eq=False)
class StageTable:
    """Heights, column offsets, floor widths and tower measures.

    Stages are 1-based.  With N parameterized stages the table knows towers
    1..N+1 (heights, widths, measures) and offsets for stages 1..N;
    ``offsets(j)[i-1]`` is the level of tower j+1 where column i of tower j
    starts.
    """

    schedule: ParamSchedule
    heights: tuple[int, ...]
    offset_table: tuple[tuple[int, ...], ...]
    widths: tuple[Fraction, ...]
    measures: tuple[Fraction, ...]

    @property
    def terminal(self) -> int:
        """Deepest tower index known to the table."""
        return len(self.heights)

    def h(self, j: int) -> int:
        return self.heights[j - 1]

    def w(self, j: int) -> Fraction:
        return self.widths[j - 1]

    def mu_tower(self, j: int) -> Fraction:
        return self.measures[j - 1]

    def offsets(self, j: int) -> tuple[int, ...]:
        if not 1 <= j < self.terminal:
            raise IndexError(f"no offsets for stage {j}; stages 1..{self.terminal - 1}")
        return self.offset_table[j - 1]

    def r(self, j: int) -> int:
        return self.schedule.stage(j).r

    def spacers(self, j: int) -> tuple[int, ...]:
        return self.schedule.stage(j).s

    def rows(self):
        """(stage, h, w, mu_X, offsets-or-None) for every tower."""
        for j in range(1, self.terminal + 1):
            offs = self.offset_table[j - 1] if j < self.terminal else None
            yield j, self.h(j), self.w(j), self.mu_tower(j), offs


def build_stages(sched: ParamSchedule, base_measure: Fraction | int = 1) -> StageTable:
    base_measure = Fraction(base_measure)
    if base_measure <= 0:
        raise ValueError("base measure must be positive")
    heights = [sched.h1]
    widths = [base_measure]
    measures = [sched.h1 * base_measure]
    offsets = []
    for st in sched.stages:
        h = heights[-1]
        offs = [0]
        for x in st.s[:-1]:
            offs.append(offs[-1] + h + x)
        h_next = offs[-1] + h + st.s[-1]
        assert h_next == h * st.r + sum(st.s)
        w_next = widths[-1] / st.r
        offsets.append(tuple(offs))
        heights.append(h_next)
        widths.append(w_next)
        measures.append(measures[-1] + w_next * sum(st.s))
    return StageTable(sched, tuple(heights), tuple(offsets), tuple(widths), tuple(measures))


def infinite_measure_diagnostic(sched: ParamSchedule) -> tuple[Fraction, list[Fraction]]:
    """Partial sum of (sum_i s_j(i)) / (h_j r_j) over the prefix, with its terms.

    Divergence of the full series is what makes the space infinite; on a
    prefix only the partial sums can be shown.
    """
    heights = sched.heights()
    terms = [Fraction(sum(st.s), heights[j] * st.r) for j, st in enumerate(sched.stages)]
    return sum(terms, Fraction(0)), terms
