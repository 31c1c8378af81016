"""Command-line interface: ``intlinsys {gen,solve,bench,check}``.

Exit codes: 0 success, 1 usage error, 2 verification or certification
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bench
from . import io as problem_io
from .classic import StoppingRule
from .errors import IntervalError
from .verified import UDMode

log = logging.getLogger("intlinsys")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

POINT_B_NOTE = "# b is generated as a point vector; all radii of A equal delta"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _methods(text: str) -> list[str]:
    names = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in names if m not in bench.METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {bad}; choose from {','.join(bench.METHODS)}")
    return names


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _options(args) -> bench.SuiteOptions:
    return bench.SuiteOptions(
        mode=UDMode(args.mode),
        stop=StoppingRule(tol=args.tol, max_iter=args.max_iter),
        repeats=getattr(args, "repeats", 3),
        spot_checks=getattr(args, "spot_checks", 5),
    )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="intlinsys", description="Enclosures for interval linear systems.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def solver_flags(sp, default_methods):
        sp.add_argument("--methods", type=_methods, default=list(default_methods))
        sp.add_argument("--mode", choices=[m.value for m in UDMode], default=UDMode.CHEAP.value)
        sp.add_argument("--max-iter", type=int, default=100)
        sp.add_argument("--tol", type=float, default=1e-12)

    g = sub.add_parser("gen", help="write random problem files")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--delta", type=_positive_float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", type=Path, help="output directory (stdout when omitted and count is 1)")

    s = sub.add_parser("solve", help="enclose the solution set of problem files")
    s.add_argument("files", nargs="+", type=Path)
    solver_flags(s, ("gs_limit", "magnitude", "nk_hull"))
    s.add_argument("--format", choices=["table", "csv", "json"], default="table")

    b = sub.add_parser("bench", help="random-instance benchmark")
    b.add_argument("--n", type=int, nargs="+", required=True)
    b.add_argument("--delta", type=_positive_float, nargs="+", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--spot-checks", type=int, default=5)
    solver_flags(b, bench.METHODS)
    b.add_argument("--format", choices=["table", "csv", "json"], default="table")
    b.add_argument("--csv", type=Path, help="also write the CSV report here")

    c = sub.add_parser("check", help="spot-check enclosures against sampled point solutions")
    c.add_argument("files", nargs="+", type=Path)
    c.add_argument("--samples", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    solver_flags(c, bench.METHODS)
    return p


def _cmd_gen(args) -> int:
    cfg = bench.GeneratorConfig(args.n, args.delta, args.seed, args.count)
    if args.out is None:
        if cfg.count != 1:
            raise _UsageError("--out is required when --count is not 1")
        print(problem_io.dumps(bench.generate_instance(cfg, 0)))
        return EXIT_OK
    args.out.mkdir(parents=True, exist_ok=True)
    for i in range(cfg.count):
        problem_io.save(bench.generate_instance(cfg, i), args.out / f"instance_{i:04d}.json")
    return EXIT_OK


def _cmd_solve(args) -> int:
    opts = _options(args)
    opts.repeats = 1
    docs = []
    status = EXIT_OK
    for path in args.files:
        raw = problem_io.load(path)
        reports = bench.solve_instance(raw, args.methods, opts)
        for r in reports:
            if r.error:
                status = EXIT_VERIFY
            docs.append(
                {
                    "file": str(path),
                    "method": r.method,
                    "enclosure": None if r.enclosure is None else r.enclosure.to_pairs(),
                    "tightness": r.tightness,
                    "time_s": r.wall_time,
                    "iterations": r.iterations,
                    "error": r.error,
                }
            )
    if args.format == "json":
        print(json.dumps(docs, indent=2))
    elif args.format == "csv":
        import csv

        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["file", "method", "i", "lo", "hi", "tightness", "error"])
        for d in docs:
            for i, (lo, hi) in enumerate(d["enclosure"] or []):
                w.writerow([d["file"], d["method"], i, repr(lo), repr(hi), d["tightness"], d["error"] or ""])
    else:
        for d in docs:
            print(f"{d['file']}  {d['method']}  tightness={d['tightness']}")
            if d["error"]:
                print(f"  error: {d['error']}")
            for i, (lo, hi) in enumerate(d["enclosure"] or []):
                print(f"  x[{i}] = [{lo:.10g}, {hi:.10g}]")
    return status


def _cmd_bench(args) -> int:
    opts = _options(args)
    configs = [bench.GeneratorConfig(n, d, args.seed, args.count) for n in args.n for d in args.delta]
    rows = bench.run_suite(configs, args.methods, opts)
    csv_text = bench.rows_to_csv(rows)
    if args.csv is not None:
        args.csv.write_text(csv_text, encoding="utf-8")
    if args.format == "csv":
        sys.stdout.write(csv_text)
    elif args.format == "json":
        print(json.dumps([r.__dict__ for r in rows], indent=2))
    else:
        print(POINT_B_NOTE)
        print("\nmean time [s]")
        print(bench.rows_to_table(rows, "mean_time_s"))
        print("\nmean tightness")
        print(bench.rows_to_table(rows, "mean_tightness"))
        failed = [r for r in rows if r.failures]
        for r in failed:
            print(f"failures: n={r.n} delta={r.delta:g} {r.method}: {r.failures}")
    return EXIT_OK


def _cmd_check(args) -> int:
    opts = _options(args)
    opts.repeats = 1
    opts.spot_checks = 0
    status = EXIT_OK
    for k, path in enumerate(args.files):
        raw = problem_io.load(path)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([args.seed, k])))
        for r in bench.solve_instance(raw, args.methods, opts):
            if r.error:
                print(f"{path}  {r.method}: ERROR {r.error}")
                status = EXIT_VERIFY
                continue
            ok = bench.spot_check(raw, r.enclosure, args.samples, rng)
            print(f"{path}  {r.method}: {'ok' if ok else 'ESCAPE'}")
            if not ok:
                status = EXIT_VERIFY
    return status


class _UsageError(Exception):
    pass


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    handler = {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench, "check": _cmd_check}[args.verb]
    try:
        return handler(args)
    except _UsageError as exc:
        print(f"intlinsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, problem_io.ProblemFileError) as exc:
        print(f"intlinsys: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IntervalError as exc:
        print(f"intlinsys: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"intlinsys: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
