"""Construction parameters for rank-one cutting-and-stacking maps.

A schedule is the initial tower height ``h1`` together with, for every
stage ``j``, the number of columns ``r`` and the spacer counts ``s``
added on top of each column.  This module parses and serializes
schedules, evaluates the per-stage conditions of the class T2 and
produces minimal-growth T2 schedules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

# JSON readers commonly lose precision above 2**53.
_NATIVE_INT_LIMIT = 2**53


class ScheduleError(ValueError):
    """Malformed or invalid parameter document."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class StageParams:
    r: int
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        if self.r < 2:
            raise ScheduleError(f"r={self.r} < 2")
        if len(self.s) != self.r:
            raise ScheduleError(f"spacer list length {len(self.s)} ≠ r={self.r}")
        for i, x in enumerate(self.s, start=1):
            if x < 0:
                raise ScheduleError(f"negative spacer s({i})={x}")

    def spacer(self, i: int) -> int:
        """1-based spacer count ``s(i)``."""
        if not 1 <= i <= self.r:
            raise IndexError(f"spacer index {i} outside 1..{self.r}")
        return self.s[i - 1]

    @property
    def n(self) -> int:
        """The spacer ``s(r-1)`` that selects the index set J(r, n)."""
        return self.s[self.r - 2]


@dataclass(frozen=True)
class ParamSchedule:
    h1: int
    stages: tuple[StageParams, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if self.h1 < 4:
            raise ScheduleError(f"h1 < 4 (got h1={self.h1})", "h1")

    def __len__(self) -> int:
        return len(self.stages)

    def stage(self, j: int) -> StageParams:
        """1-based stage lookup."""
        if not 1 <= j <= len(self.stages):
            raise IndexError(f"stage {j} outside 1..{len(self.stages)}")
        return self.stages[j - 1]

    def heights(self) -> list[int]:
        """Tower heights h_1..h_{N+1}."""
        hs = [self.h1]
        for st in self.stages:
            hs.append(hs[-1] * st.r + sum(st.s))
        return hs


# --- document format -------------------------------------------------------


def _parse_int(value, location: str) -> int:
    if isinstance(value, bool):
        raise ScheduleError(f"expected integer, got {value!r}", location)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            pass
    raise ScheduleError(f"expected integer, got {value!r}", location)


def _dump_int(x: int):
    return x if abs(x) < _NATIVE_INT_LIMIT else str(x)


def schedule_from_dict(doc: dict) -> ParamSchedule:
    if not isinstance(doc, dict):
        raise ScheduleError("document must be an object")
    if "h1" not in doc:
        raise ScheduleError("missing field", "h1")
    h1 = _parse_int(doc["h1"], "h1")
    if h1 < 4:
        raise ScheduleError(f"h1 < 4 (got h1={h1})", "h1")
    raw_stages = doc.get("stages")
    if not isinstance(raw_stages, list):
        raise ScheduleError("must be an array", "stages")
    stages = []
    for j, raw in enumerate(raw_stages, start=1):
        loc = f"stages[{j}]"
        if not isinstance(raw, dict) or "r" not in raw or "s" not in raw:
            raise ScheduleError('expected {"r": int, "s": [int, ...]}', loc)
        r = _parse_int(raw["r"], f"{loc}.r")
        if not isinstance(raw["s"], list):
            raise ScheduleError("must be an array", f"{loc}.s")
        s = [_parse_int(x, f"{loc}.s[{i}]") for i, x in enumerate(raw["s"], start=1)]
        try:
            stages.append(StageParams(r, tuple(s)))
        except ScheduleError as exc:
            raise ScheduleError(str(exc), loc) from None
    return ParamSchedule(h1, tuple(stages))


def parse_schedule(text: str) -> ParamSchedule:
    """Parse a JSON parameter document.

    Integers may be JSON numbers or decimal strings (for values beyond the
    native range of typical JSON readers).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScheduleError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return schedule_from_dict(doc)


def schedule_to_dict(sched: ParamSchedule) -> dict:
    return {
        "h1": _dump_int(sched.h1),
        "stages": [{"r": _dump_int(st.r), "s": [_dump_int(x) for x in st.s]} for st in sched.stages],
    }


def serialize_schedule(sched: ParamSchedule) -> str:
    return json.dumps(schedule_to_dict(sched), indent=2) + "\n"


def load_schedule(path) -> ParamSchedule:
    with open(path, encoding="utf-8") as fh:
        return parse_schedule(fh.read())


# --- class T2 ----------------------------------------------------------------

# Condition ids, in report order.
R_ORDER = "r_order"  # r_1 > 4, r_j nondecreasing
N_LE_R = "n_le_r"  # J(r, n) empty for r < n, i.e. s_j(r_j - 1) <= r_j
S_FIRST = "s_first"  # s_j(1) >= 4 h_j
S_GROWTH = "s_growth"  # s_j(i) >= 4 s_j(i-1), i = 2..r_j-3
S_GAP = "s_gap"  # s_j(r_j - 2) = 0
S_LAST = "s_last"  # s_j(r_j) >= 4 s_j(r_j - 3)

CONDITIONS = (R_ORDER, N_LE_R, S_FIRST, S_GROWTH, S_GAP, S_LAST)

CONDITION_TEXT = {
    R_ORDER: "r_j nondecreasing, r_1 > 4",
    N_LE_R: "J(r,n) empty for r < n",
    S_FIRST: "s_j(1) >= 4h_j",
    S_GROWTH: "s_j(i) >= 4s_j(i-1), i=2..r_j-3",
    S_GAP: "s_j(r_j-2) = 0",
    S_LAST: "s_j(r_j) >= 4s_j(r_j-3)",
}


@dataclass(frozen=True)
class ConditionOutcome:
    condition: str
    stage: int
    passed: bool
    witness: str


@dataclass(frozen=True)
class ClassReport:
    outcomes: tuple[ConditionOutcome, ...]
    notes: tuple[str, ...]

    @property
    def prefix_consistent(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def failures(self) -> list[ConditionOutcome]:
        return [o for o in self.outcomes if not o.passed]

    def outcome(self, condition: str, stage: int) -> ConditionOutcome:
        for o in self.outcomes:
            if o.condition == condition and o.stage == stage:
                return o
        raise KeyError((condition, stage))


def _stage_outcomes(j: int, st: StageParams, h: int, prev_r: int | None) -> list[ConditionOutcome]:
    r, s = st.r, st.s
    out = []

    def add(cond, ok, witness):
        out.append(ConditionOutcome(cond, j, bool(ok), witness))

    if prev_r is None:
        add(R_ORDER, r > 4, f"r_1={r}")
    else:
        add(R_ORDER, r >= prev_r, f"r_{j - 1}={prev_r}, r_{j}={r}")

    n = s[r - 2]
    add(N_LE_R, n <= r, f"n=s({r - 1})={n}, r={r}")
    add(S_FIRST, s[0] >= 4 * h, f"s(1)={s[0]}, 4h={4 * h}")

    bad = [i for i in range(2, r - 2) if s[i - 1] < 4 * s[i - 2]]
    if bad:
        i = bad[0]
        add(S_GROWTH, False, f"s({i})={s[i - 1]} < 4s({i - 1})={4 * s[i - 2]}")
    else:
        add(S_GROWTH, True, f"checked i=2..{r - 3}" if r >= 5 else "no interior indices")

    if r >= 3:
        add(S_GAP, s[r - 3] == 0, f"s({r - 2})={s[r - 3]}")
    else:
        add(S_GAP, False, f"s(r-2) undefined for r={r}")

    if r >= 4:
        add(S_LAST, s[r - 1] >= 4 * s[r - 4], f"s({r})={s[r - 1]}, 4s({r - 3})={4 * s[r - 4]}")
    else:
        add(S_LAST, False, f"s(r-3) undefined for r={r}")
    return out


def check_t2(sched: ParamSchedule) -> ClassReport:
    """Evaluate every per-stage T2 condition on a finite schedule prefix.

    The asymptotic conditions (every r value eventually occurs, the limsup
    of |J(r,n)|/r^4 is infinite) cannot be decided from a prefix; the report
    carries the finite evidence for them as notes.
    """
    heights = sched.heights()
    outcomes: list[ConditionOutcome] = []
    prev_r = None
    for j, st in enumerate(sched.stages, start=1):
        outcomes.extend(_stage_outcomes(j, st, heights[j - 1], prev_r))
        prev_r = st.r

    notes = []
    rs = [st.r for st in sched.stages]
    if rs:
        present = sorted(set(rs))
        missing = [v for v in range(rs[0], max(rs) + 1) if v not in present]
        notes.append(
            "not decidable on a finite prefix: r_j takes all values from r_1; "
            f"present={present}, missing in [r_1, max r]={missing}"
        )
        counts = j_counts(sched)
        shown = ", ".join(f"|J({r},{n})|={c}" for (r, n), c in sorted(counts.items()))
        notes.append(f"not decidable on a finite prefix: limsup |J(r,n)|/r^4 = inf; {shown}")
    return ClassReport(tuple(outcomes), tuple(notes))


def j_set(sched: ParamSchedule, r: int, n: int) -> list[int]:
    """Stages j (1-based, ascending) with r_j = r and s_j(r_j - 1) = n."""
    return [j for j, st in enumerate(sched.stages, start=1) if st.r == r and st.n == n]


def j_counts(sched: ParamSchedule) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for st in sched.stages:
        counts[st.r, st.n] = counts.get((st.r, st.n), 0) + 1
    return counts


# --- generation ----------------------------------------------------------------


def t2_min_stage(h: int, r: int, n: int) -> StageParams:
    """Smallest spacers meeting every per-stage T2 condition with equality."""
    if r < 5:
        raise ScheduleError(f"r={r} < 5: T2 needs r_1 > 4")
    if not 1 <= n <= r:
        raise ScheduleError(f"n={n} outside 1..r={r}")
    s = [0] * r
    s[0] = 4 * h
    for i in range(2, r - 2):
        s[i - 1] = 4 * s[i - 2]
    s[r - 3] = 0
    s[r - 2] = n
    s[r - 1] = 4 * s[r - 4]
    return StageParams(r, tuple(s))


def generate_t2_min(h1: int, pairs: Iterable[Sequence[int]]) -> ParamSchedule:
    """Minimal-growth T2 schedule whose stage j has (r_j, s_j(r_j-1)) = pairs[j]."""
    pairs = [tuple(p) for p in pairs]
    if not pairs:
        raise ScheduleError("at least one (r, n) pair is required")
    h = h1
    if h < 4:
        raise ScheduleError(f"h1 < 4 (got h1={h1})", "h1")
    stages = []
    prev_r = 0
    for k, (r, n) in enumerate(pairs, start=1):
        if r < prev_r:
            raise ScheduleError(f"r sequence decreases at pair {k}: {prev_r} -> {r}")
        st = t2_min_stage(h, r, n)
        stages.append(st)
        h = h * r + sum(st.s)
        prev_r = r
    return ParamSchedule(h1, tuple(stages))
