"""Column-touch counts of X_j ∩ T^m X_j across a whole Sidon window.

Prints one row per m with the count, so the band of m where every column is
hit (the last h_j values before h_{j+1}) is easy to plot.

    python scripts/sidon_band.py --pairs 5:3,5:3 --j 1 > band.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from rankone.cli import parse_pairs
from rankone.params import generate_t2_min
from rankone.tower import build_stages
from rankone.verify import sidon_scan


@dataclass(frozen=True)
class BandConfig:
    h1: int = 4
    pairs: tuple = ((5, 3), (5, 3))
    j: int = 1
    k: int = 2


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h1", type=int, default=BandConfig.h1)
    ap.add_argument("--pairs", type=parse_pairs, default=BandConfig.pairs)
    ap.add_argument("--j", type=int, default=BandConfig.j)
    ap.add_argument("--k", type=int, default=BandConfig.k)
    args = ap.parse_args(argv)
    cfg = BandConfig(args.h1, tuple(args.pairs), args.j, args.k)

    table = build_stages(generate_t2_min(cfg.h1, list(cfg.pairs)))
    scan = sidon_scan(table, cfg.j, k=cfg.k, keep_reports=True)
    out = csv.writer(sys.stdout)
    out.writerow(["m", "count", "columns", "from_top"])
    top = table.h(cfg.j + 1)
    for rep in scan.reports:
        out.writerow([rep.m, rep.count, " ".join(map(str, rep.touched)), top - rep.m])
    print(f"# h_j={table.h(cfg.j)} h_j+1={top} violations={len(scan.violations)} worst={scan.worst}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
