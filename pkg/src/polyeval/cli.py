"""``polyeval`` command line.

Exit status 2 flags malformed input (with a line number), 3 a certified routine
that gave up (the error class name is printed on stderr).
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .bench import run_bench, write_csv
from .dyadic import DyadicComplex
from .errors import ParseError, PolyEvalError
from .interp import InterpProblem, interpolate
from .mpeval import multipoint_eval
from .refine import RefineJob, refine_batch
from .taylor import taylor_shift


def _prec(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("precision must be non-negative")
    return v


def _cmd_eval(args):
    F = io.read_poly(args.poly)
    pts = io.read_points(args.points)
    io.write_points(args.out, multipoint_eval(F, pts, args.prec, workers=args.workers))


def _cmd_interp(args):
    pts = io.read_points(args.points)
    vals = io.read_points(args.values)
    if len(pts) != len(vals):
        raise ParseError(f"{len(pts)} points but {len(vals)} values", None, args.values)
    F = interpolate(InterpProblem(pts, vals), args.prec, workers=args.workers)
    io.write_poly(args.out, F.trimmed())


def _cmd_shift(args):
    F = io.read_poly(args.poly)
    try:
        m = DyadicComplex.from_literal(args.m)
    except ValueError:
        raise ParseError(f"bad shift literal {args.m!r}", None, "--m") from None
    io.write_poly(args.out, taylor_shift(F, m, args.prec, workers=args.workers))


def _cmd_refine(args):
    F = io.read_poly(args.poly)
    if not F.is_real():
        raise ParseError("refine needs real coefficients", None, args.poly)
    ivs = io.read_intervals(args.intervals)
    io.write_intervals(args.out, refine_batch(RefineJob(F, ivs, args.prec), workers=args.workers))


def _cmd_bench(args):
    rows = run_bench(args.mode, args.n, args.prec, args.tau, args.gamma, args.repeat,
                     seed=args.seed, workers=args.workers)
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyeval",
                                description="Certified approximate polynomial arithmetic.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help="cap on worker threads (results do not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate F at every point to 2**-prec")
    s.add_argument("--poly", required=True)
    s.add_argument("--points", required=True)
    s.add_argument("--prec", type=_prec, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_eval)

    s = sub.add_parser("interp", parents=[common], help="interpolate values at points")
    s.add_argument("--points", required=True)
    s.add_argument("--values", required=True)
    s.add_argument("--prec", type=_prec, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_interp)

    s = sub.add_parser("shift", parents=[common], help="Taylor shift F(x) -> F(m + x)")
    s.add_argument("--poly", required=True)
    s.add_argument("--m", required=True)
    s.add_argument("--prec", type=_prec, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_shift)

    s = sub.add_parser("refine", parents=[common],
                       help="refine isolating intervals of a real polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--intervals", required=True)
    s.add_argument("--prec", type=_prec, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_refine)

    s = sub.add_parser("bench", parents=[common], help="time random instances, write CSV")
    s.add_argument("--mode", choices=("eval", "horner"), default="eval")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--prec", type=_prec, required=True)
    s.add_argument("--tau", type=int, default=8)
    s.add_argument("--gamma", type=int, default=8)
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-")
    s.set_defaults(func=_cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PolyEvalError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
