"""Exact arithmetic for rank-one cutting-and-stacking transformations."""

from .correlation import (
    CorrelationResult,
    ShiftedCombo,
    correlate,
    inner,
    one_plus_shift,
    oracle_bounds,
    oracle_correlate,
)
from .levelset import (
    LevelSet,
    column_set,
    flatten,
    floor_set,
    intersect,
    measure,
    parse_address,
    refine,
    tower_set,
    union,
)
from .params import (
    ClassReport,
    ParamSchedule,
    ScheduleError,
    StageParams,
    check_t2,
    generate_t2_min,
    j_set,
    parse_schedule,
    serialize_schedule,
)
from .tensor import TensorVec, approx_error, build_F, build_P_applied, tensor_inner, tensor_norm2
from .tower import StageTable, build_stages, infinite_measure_diagnostic
from .verify import (
    LemmaReport,
    SidonReport,
    lemma1_check,
    lemma2_check,
    lemma3_check,
    mixing_profile,
    sidon_count,
    sidon_scan,
)
