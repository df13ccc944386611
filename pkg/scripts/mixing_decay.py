"""mu(A ∩ T^m A) against the k mu(A)/r_j envelope on a log-spaced grid of m.

    python scripts/mixing_decay.py --pairs 5:3,5:3,5:3,5:3 --points 400 > decay.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from rankone.cli import parse_pairs, q
from rankone.params import generate_t2_min
from rankone.tower import build_stages
from rankone.verify import default_floor, mixing_profile


@dataclass(frozen=True)
class DecayConfig:
    h1: int = 4
    pairs: tuple = ((5, 3),) * 4
    points: int = 400
    k: int = 2


def log_grid(lo, hi, points):
    ratio = (hi / lo) ** (1 / max(points - 1, 1))
    return sorted({min(hi, round(lo * ratio**i)) for i in range(points)})


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h1", type=int, default=DecayConfig.h1)
    ap.add_argument("--pairs", type=parse_pairs, default=DecayConfig.pairs)
    ap.add_argument("--points", type=int, default=DecayConfig.points)
    ap.add_argument("--k", type=int, default=DecayConfig.k)
    args = ap.parse_args(argv)
    cfg = DecayConfig(args.h1, tuple(args.pairs), args.points, args.k)

    table = build_stages(generate_t2_min(cfg.h1, list(cfg.pairs)))
    A = default_floor(table)
    ms = log_grid(table.h(1), table.h(table.terminal) - 1, cfg.points)
    out = csv.writer(sys.stdout)
    out.writerow(["m", "value", "float", "window", "bound", "status"])
    for row in mixing_profile(table, A, A, 0, 0, k=cfg.k, ms=ms):
        bound = "" if row.bound is None else q(row.bound)
        out.writerow([row.m, q(row.value.lo), f"{float(row.value.lo):.3e}", row.window, bound, row.status])


if __name__ == "__main__":
    main()
