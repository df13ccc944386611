"""Exact Lemma 1-3 residuals and the approximation error over minimal-growth schedules.

    python scripts/lemma_sweep.py --pairs 5:3,5:5,6:2,6:6 --max-stages 3 > sweep.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from rankone.cli import parse_pairs, q
from rankone.params import generate_t2_min, j_set
from rankone.tensor import approx_error
from rankone.tower import build_stages
from rankone.verify import default_floor, lemma1_check, lemma2_check, lemma3_check


@dataclass(frozen=True)
class SweepConfig:
    h1: int = 4
    pairs: tuple = ((5, 3), (5, 5), (6, 2), (6, 6))
    max_stages: int = 3


def rows(cfg):
    for r, n in cfg.pairs:
        for size in range(1, cfg.max_stages + 1):
            sched = generate_t2_min(cfg.h1, [(r, n)] * size)
            table = build_stages(sched)
            A = default_floor(table)
            js = j_set(sched, r, n)
            worst1 = max(abs(lemma1_check(table, sched, j, m).residual) for j in js for m in (0, n))
            pairs = [(i, j) for i in js for j in js if i != j]
            worst2 = max((abs(lemma2_check(table, sched, r, n, i, j).residual) for i, j in pairs), default=0)
            l3 = lemma3_check(table, sched, r, n)
            rep = approx_error(table, sched, A, r, n)
            yield {
                "r": r, "n": n, "stages": size, "J": len(js),
                "lemma1_max_residual": q(worst1),
                "lemma2_max_residual": q(worst2),
                "lemma3_lhs": q(l3.lhs.value),
                "lemma3_residual": q(l3.residual),
                "error2": q(rep.error2.value),
                "bound": q(rep.bound),
            }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h1", type=int, default=SweepConfig.h1)
    ap.add_argument("--pairs", type=parse_pairs, default=SweepConfig.pairs)
    ap.add_argument("--max-stages", type=int, default=SweepConfig.max_stages)
    args = ap.parse_args(argv)
    cfg = SweepConfig(args.h1, tuple(args.pairs), args.max_stages)
    out = None
    for row in rows(cfg):
        if out is None:
            out = csv.DictWriter(sys.stdout, fieldnames=list(row))
            out.writeheader()
        out.writerow(row)


if __name__ == "__main__":
    main()
