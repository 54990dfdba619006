"""Command line entry point: build-matrix, perron, sweep, interlace.

Exit codes: 0 success, 1 usage, 2 parse, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .curve_model import FillingPairConfig, HomologyClass, NecklaceConfig, find_interlacing
from .errors import ConfigError, ConvergenceError, DimensionError, InvalidCurveError, MatrixParseError
from .experiments import SweepConfig, run_sweep
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, column_sum_bounds, perron
from .twist_algebra import (
    base_curve_matrix,
    lifted_full_matrix,
    load,
    necklace_root_matrix,
    psi_matrix,
    save,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="l1roots", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build-matrix", help="write a curve matrix in triple format")
    p.add_argument("--kind", choices=["base", "lifted", "root", "psi"], required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--side", choices=["unstable", "stable"], default="unstable")
    p.add_argument("--out", required=True)

    p = sub.add_parser("perron", help="Perron root and vector of a matrix file")
    p.add_argument("matrix_path")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--carrying", action="store_true",
                   help="use the transpose (carrying orientation) for the vector")

    p = sub.add_parser("sweep", help="convergence sweep over m")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--side", choices=["unstable", "stable"], default="unstable")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-json")
    p.add_argument("--out-csv")

    p = sub.add_parser("interlace", help="search a mod-2 interlacing witness")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--c", dest="c_bits", required=True)
    p.add_argument("--d", dest="d_bits", required=True)
    return parser


def cmd_build_matrix(args) -> int:
    if args.kind == "base":
        M = base_curve_matrix(FillingPairConfig(args.r, args.N, args.n))
    else:
        cfg = NecklaceConfig(args.m, args.n)
        stable = args.side == "stable"
        if args.kind == "lifted":
            M = lifted_full_matrix(cfg, args.r, args.N)
        elif args.kind == "root":
            M = necklace_root_matrix(cfg, args.r, args.N, stable=stable)
        else:
            M = psi_matrix(cfg, args.r, args.N, stable=stable)
    save(M, args.out)
    lo, hi = column_sum_bounds(M)
    print(f"wrote {args.out}: dim {M.dim}, nnz {M.nnz}")
    print(f"column sums in [{lo}, {hi}]")
    print(f"det {M.determinant()}")
    return EXIT_OK


def cmd_perron(args) -> int:
    M = load(args.matrix_path)
    if args.carrying:
        M = M.T
    pd = perron(M, tol=args.tol, max_iter=args.max_iter)
    out = pd.as_dict()
    out["labels"] = list(M.labels)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        r=args.r, N=args.N, n=args.n, m_min=args.m_min, m_max=args.m_max,
        side=args.side, tol=args.tol, max_iter=args.max_iter, workers=args.workers,
    )
    report = run_sweep(cfg)
    if args.out_json:
        report.write_json(args.out_json)
    if args.out_csv:
        report.write_csv(args.out_csv)
    for rec in report.records:
        bad = [k for k, ok in rec.checks.items() if not ok]
        status = "ok" if not bad else "FAILED " + ",".join(bad)
        print(f"m={rec.m:3d} lambda_m^n={rec.lambda_m_pow_n:.10f} "
              f"avg_gap={rec.avg_gap:.3e} {status}")
    for key, value in report.observations.items():
        print(f"  {key}: {value}")
    if not report.hard_checks_pass:
        print("hard invariants failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_interlace(args) -> int:
    if len(args.c_bits) != 2 * args.g or len(args.d_bits) != 2 * args.g:
        raise UsageError(f"bit strings must have length 2g = {2 * args.g}")
    c = HomologyClass.from_bits(args.c_bits)
    d = HomologyClass.from_bits(args.d_bits)
    witness = find_interlacing(c, d)
    if witness is None:
        print("none")
    else:
        alpha, beta = witness
        print(f"alpha={alpha.bits()} beta={beta.bits()}")
    return EXIT_OK


COMMANDS = {
    "build-matrix": cmd_build_matrix,
    "perron": cmd_perron,
    "sweep": cmd_sweep,
    "interlace": cmd_interlace,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UsageError, InvalidCurveError, DimensionError) as exc:
        print(f"l1roots {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatrixParseError as exc:
        print(f"l1roots {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"l1roots {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        where = f" at m={exc.m}" if exc.m is not None else ""
        print(f"l1roots {args.command}: numeric failure{where}: {exc} "
              f"(residual {exc.residual})", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
