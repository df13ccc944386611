"""Command-line front end.

Exit codes: 0 all checks pass, 1 a violation was found, 2 a computation
error or unresolved correlation, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from fractions import Fraction

from .correlation import CorrelationError, correlate, oracle_correlate
from .levelset import DEFAULT_CAP, AddressError, CapExceeded, parse_address
from .params import (
    CONDITION_TEXT,
    ParamSchedule,
    ScheduleError,
    check_t2,
    generate_t2_min,
    j_counts,
    j_set,
    load_schedule,
    serialize_schedule,
)
from .tensor import FORM_SUM, FORM_SQUARE, approx_error
from .tower import build_stages
from .verify import (
    EXHAUSTIVE_LIMIT,
    OK,
    UNRESOLVED,
    VIOLATION,
    Unresolved,
    default_floor,
    lemma1_check,
    lemma2_check,
    lemma3_check,
    mixing_profile,
    sidon_count,
    sidon_window,
)

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    params: str | None
    output: str
    fmt: str
    cap: int
    scan_cap: int
    seed: int
    verbose: bool


def q(x: Fraction | int) -> str:
    """Exact rational as num/den in lowest terms."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_ms(text: str) -> list[int]:
    """``4``, ``1,5,9``, ``0..12`` or a mix: ``-3,0..4``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                a, b = part.split("..", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad m value {part!r}") from None
    if not out:
        raise UsageError("no m values given")
    return out


def parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in text.split(","):
        try:
            r, n = part.split(":")
            pairs.append((int(r), int(n)))
        except ValueError:
            raise UsageError(f"bad r:n pair {part!r}") from None
    return pairs


def _csv_writer(out):
    return csv.writer(out, lineterminator="\n")


def _load(cfg: RunConfig, stages: int | None = None) -> ParamSchedule:
    if not cfg.params:
        raise UsageError("--params is required")
    sched = load_schedule(cfg.params)
    if stages is not None:
        if not 1 <= stages <= len(sched):
            raise UsageError(f"--stages must be in 1..{len(sched)}")
        sched = ParamSchedule(sched.h1, sched.stages[:stages])
    return sched


def _set(table, text, cfg: RunConfig, err):
    s = parse_address(table, text, cfg.cap)
    if cfg.verbose:
        print(f"# {text} -> {s.describe()}", file=err)
    return s


# --- subcommands ---------------------------------------------------------------------


def cmd_validate(args, cfg, out, err):
    sched = _load(cfg)
    report = check_t2(sched)
    w = _csv_writer(out)
    w.writerow(["stage", "condition", "description", "pass", "witness"])
    for o in report.outcomes:
        w.writerow([o.stage, o.condition, CONDITION_TEXT[o.condition], int(o.passed), o.witness])
    for note in report.notes:
        print(f"# {note}", file=out)
    verdict = "prefix-consistent with T2" if report.prefix_consistent else "not in T2"
    print(f"# verdict: {verdict}", file=out)
    return EXIT_OK if report.prefix_consistent else EXIT_VIOLATION


def cmd_build(args, cfg, out, err):
    sched = _load(cfg, args.stages)
    table = build_stages(sched, Fraction(args.base_measure))
    rows = [(j, h, q(w), q(mu), " ".join(map(str, offs)) if offs else "") for j, h, w, mu, offs in table.rows()]
    header = ["stage", "h", "w", "mu_X", "offsets"]
    if cfg.fmt == "csv":
        w = _csv_writer(out)
        w.writerow(header)
        w.writerows(rows)
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
        for row in [header, *rows]:
            print("  ".join(str(x).rjust(n) for x, n in zip(row, widths)).rstrip(), file=out)
    return EXIT_OK


def cmd_corr(args, cfg, out, err):
    table = build_stages(_load(cfg))
    A = _set(table, args.set_a, cfg, err)
    B = _set(table, args.set_b, cfg, err)
    w = _csv_writer(out)
    w.writerow(["m", "lo", "unresolved", "status"])
    code = EXIT_OK
    for m in parse_ms(args.m):
        res = correlate(table, A, B, m, args.stage, cfg.cap)
        w.writerow([m, q(res.lo), q(res.unresolved), "exact" if res.exact else "inexact"])
        if not res.exact:
            code = EXIT_ERROR
    return code


def cmd_oracle(args, cfg, out, err):
    table = build_stages(_load(cfg))
    A = _set(table, args.set_a, cfg, err)
    B = _set(table, args.set_b, cfg, err)
    J = args.stage or table.terminal
    w = _csv_writer(out)
    w.writerow(["m", "stage", "value"])
    for m in parse_ms(args.m):
        w.writerow([m, J, q(oracle_correlate(table, A, B, m, J, cfg.cap))])
    return EXIT_OK


def cmd_sidon(args, cfg, out, err):
    table = build_stages(_load(cfg))
    j, k = args.j, args.k
    if args.m:
        ms = parse_ms(args.m)
    else:
        window = sidon_window(table, j)
        if args.mode == "exhaustive":
            if len(window) > cfg.scan_cap:
                raise UsageError(f"window has {len(window)} values > scan cap {cfg.scan_cap}; use --mode sample")
            ms = window
        else:
            import random

            ms = sorted(random.Random(cfg.seed).sample(window, min(args.samples, len(window))))
    w = _csv_writer(out)
    w.writerow(["j", "m", "count", "columns", "status"])
    worst, violations, unresolved = 0, 0, 0
    for m in ms:
        try:
            rep = sidon_count(table, j, m, k)
        except Unresolved:
            unresolved += 1
            w.writerow([j, m, "", "", UNRESOLVED])
            continue
        worst = max(worst, rep.count)
        status = OK if rep.passed else VIOLATION
        violations += not rep.passed
        if args.all_rows or not rep.passed:
            w.writerow([j, m, rep.count, " ".join(map(str, rep.touched)), status])
    print(f"# j={j} k={k} scanned={len(ms)} worst={worst} violations={violations} unresolved={unresolved}", file=err)
    if unresolved:
        return EXIT_ERROR
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_mixing(args, cfg, out, err):
    table = build_stages(_load(cfg))
    A = _set(table, args.set_a, cfg, err) if args.set_a else default_floor(table)
    B = _set(table, args.set_b, cfg, err) if args.set_b else A
    ms = None
    if args.samples:
        import random

        window = range(args.m_from, args.m_to + 1)
        ms = sorted(random.Random(cfg.seed).sample(window, min(args.samples, len(window))))
    rows = mixing_profile(table, A, B, args.m_from, args.m_to, args.k, ms)
    w = _csv_writer(out)
    w.writerow(["m", "lo", "unresolved", "window", "bound", "status"])
    for row in rows:
        w.writerow(
            [
                row.m,
                q(row.value.lo),
                q(row.value.unresolved),
                "" if row.window is None else row.window,
                "" if row.bound is None else q(row.bound),
                row.status,
            ]
        )
    statuses = {row.status for row in rows}
    if VIOLATION in statuses:
        return EXIT_VIOLATION
    return EXIT_ERROR if UNRESOLVED in statuses else EXIT_OK


def _lemma_reports(args, table, sched):
    A = _set(table, args.floor, args.cfg, args.err) if args.floor else default_floor(table)
    if args.which == 1:
        if args.j is not None:
            js = [args.j]
        elif args.r is not None and args.n is not None:
            js = j_set(sched, args.r, args.n)
        else:
            js = range(1, len(sched) + 1)
        for j in js:
            n = sched.stage(j).n
            for m in [args.m] if args.m is not None else sorted({0, n}):
                yield lemma1_check(table, sched, j, m, A)
        return
    if args.r is None or args.n is None:
        raise UsageError(f"lemma {args.which} needs --r and --n")
    if args.which == 2:
        if args.i is not None and args.j is not None:
            pairs = [(args.i, args.j)]
        else:
            js = j_set(sched, args.r, args.n)
            pairs = [(i, j) for i in js for j in js if i < j]
        for i, j in pairs:
            yield lemma2_check(table, sched, args.r, args.n, i, j, A)
        return
    yield lemma3_check(table, sched, args.r, args.n, A)


def _fmt_params(p: dict) -> str:
    return " ".join(f"{k}={';'.join(map(str, v)) if isinstance(v, tuple) else v}" for k, v in p.items())


def cmd_lemma(args, cfg, out, err):
    sched = _load(cfg)
    table = build_stages(sched)
    args.cfg, args.err = cfg, err
    reports = list(_lemma_reports(args, table, sched))
    if not reports:
        raise UsageError("no lemma instances selected (J(r,n) empty?)")
    w = _csv_writer(out) if cfg.fmt == "csv" else None
    if w:
        w.writerow(["lemma", "params", "lhs", "rhs", "residual", "status"])
    code = EXIT_OK
    for rep in reports:
        if rep.exact:
            status = OK if rep.holds else VIOLATION
            lhs, rhs, res = q(rep.lhs.lo), q(rep.rhs.lo), q(rep.residual)
        else:
            status = UNRESOLVED
            lhs = f"[{q(rep.lhs.lo)},{q(rep.lhs.hi)}]"
            rhs = f"[{q(rep.rhs.lo)},{q(rep.rhs.hi)}]"
            res = ""
        if status == VIOLATION:
            code = max(code, EXIT_VIOLATION)
        elif status == UNRESOLVED:
            code = EXIT_ERROR
        if w:
            w.writerow([rep.lemma, _fmt_params(rep.params), lhs, rhs, res, status])
        else:
            print(f"lemma={rep.lemma} {_fmt_params(rep.params)} lhs={lhs} rhs={rhs} residual={res} status={status}", file=out)
    return code


def cmd_approx(args, cfg, out, err):
    sched = _load(cfg)
    table = build_stages(sched)
    A = _set(table, args.floor, cfg, err) if args.floor else default_floor(table)
    if args.sweep:
        pairs = sorted(j_counts(sched))
    else:
        if args.r is None or args.n is None:
            raise UsageError("approx needs --r and --n (or --sweep)")
        pairs = [(args.r, args.n)]
    header = ["r", "n", "J", "error2", "lemma3_rhs_r4", "bound", "agree", "verdict"]
    w = _csv_writer(out) if cfg.fmt == "csv" or args.sweep else None
    if w:
        w.writerow(header)
    code = EXIT_OK
    for r, n in pairs:
        rep = approx_error(table, sched, A, r, n, args.form)
        if not rep.exact:
            code = EXIT_ERROR
            verdict = UNRESOLVED
        else:
            verdict = "pass" if rep.within_bound else "fail"
            if not rep.within_bound or (args.form == FORM_SQUARE and not rep.agrees):
                code = max(code, EXIT_VIOLATION)
        e2 = q(rep.error2.lo) if rep.error2.exact else f"[{q(rep.error2.lo)},{q(rep.error2.hi)}]"
        l3 = q(rep.lemma3_scaled.lo) if rep.lemma3_scaled.exact else f"[{q(rep.lemma3_scaled.lo)},{q(rep.lemma3_scaled.hi)}]"
        row = [r, n, rep.j_size, e2, l3, q(rep.bound), int(rep.agrees), verdict]
        if w:
            w.writerow(row)
        else:
            for key, val in zip(header, row):
                print(f"{key}={val}", file=out)
    return code


def cmd_generate(args, cfg, out, err):
    if not args.t2_min:
        raise UsageError("only --t2-min generation is available")
    sched = generate_t2_min(args.h1, parse_pairs(args.pairs))
    out.write(serialize_schedule(sched))
    return EXIT_OK


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--params", help="parameter document (JSON)")
    common.add_argument("--output", default="-", help="output path, - for stdout")
    common.add_argument("--format", dest="fmt", choices=["table", "csv"], default="table")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="flatten/refine size cap")
    common.add_argument("--scan-cap", type=int, default=EXHAUSTIVE_LIMIT)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--verbose", action="store_true", help="echo parsed sets")

    p = _Parser(prog="rankone", description="Exact experiments on rank-one cutting-and-stacking maps.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check the per-stage T2 conditions")

    b = sub.add_parser("build", parents=[common], help="tower heights, widths, offsets")
    b.add_argument("--stages", type=int, help="use only the first N parameterized stages")
    b.add_argument("--base-measure", default="1", help="measure of the stage-1 base")

    for name, helptext in (("corr", "exact mu(A ∩ T^m B)"), ("oracle", "brute-force mu(A ∩ T^m B)")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("--set-a", required=True)
        c.add_argument("--set-b", required=True)
        c.add_argument("--m", required=True, help="m values: 4 | 1,5,9 | 0..12")
        c.add_argument("--stage", type=int, help="tower to resolve in (default deepest)")

    s = sub.add_parser("sidon", parents=[common], help="k-Sidon column counts")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--m", help="explicit m values instead of the window")
    s.add_argument("--all-rows", action="store_true", help="emit passing rows too")

    mx = sub.add_parser("mixing", parents=[common], help="correlations against the k mu(A)/r_j bound")
    mx.add_argument("--set-a")
    mx.add_argument("--set-b")
    mx.add_argument("--m-from", type=int, required=True)
    mx.add_argument("--m-to", type=int, required=True)
    mx.add_argument("--k", type=int, default=2)
    mx.add_argument("--samples", type=int, help="sample this many m values (seeded)")

    lm = sub.add_parser("lemma", parents=[common], help="residuals of the correlation lemmas")
    lm.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    lm.add_argument("--r", type=int)
    lm.add_argument("--n", type=int)
    lm.add_argument("--i", type=int)
    lm.add_argument("--j", type=int)
    lm.add_argument("--m", type=int)
    lm.add_argument("--floor", help="stage-1 floor address (default 1:0)")

    ap = sub.add_parser("approx", parents=[common], help="r^2 P_{r,n} f⊗f against F_n")
    ap.add_argument("--r", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--floor", help="set address (default 1:0)")
    ap.add_argument("--sweep", action="store_true", help="all (r, n) with nonempty J")
    ap.add_argument("--form", choices=[FORM_SQUARE, FORM_SUM], default=FORM_SQUARE, help="which F_n to compare against")

    g = sub.add_parser("generate", parents=[common], help="emit a parameter document")
    g.add_argument("--t2-min", action="store_true", required=True)
    g.add_argument("--h1", type=int, default=4)
    g.add_argument("--pairs", required=True, help="r:n pairs, e.g. 5:3,5:3")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "corr": cmd_corr,
    "oracle": cmd_oracle,
    "sidon": cmd_sidon,
    "mixing": cmd_mixing,
    "lemma": cmd_lemma,
    "approx": cmd_approx,
    "generate": cmd_generate,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(args.subcommand, args.params, args.output, args.fmt, args.cap, args.scan_cap, args.seed, args.verbose)
    if cfg.cap <= 0 or cfg.scan_cap <= 0:
        print("rankone: error: caps must be positive", file=stderr)
        return EXIT_USAGE
    buf = io.StringIO()
    try:
        code = COMMANDS[args.subcommand](args, cfg, buf, stderr)
    except (UsageError, AddressError) as exc:
        print(f"rankone: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ScheduleError, CorrelationError, CapExceeded, ValueError, IndexError, OSError) as exc:
        print(f"rankone: error: {exc}", file=stderr)
        return EXIT_ERROR
    if cfg.output == "-":
        stdout.write(buf.getvalue())
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    return code


def main():
    sys.exit(run())
