"""
Command-line front end.

    pinvupdate pinv A.json
    pinvupdate check A.json X.json Y.json
    pinvupdate update A.json X.json Y.json [--verify] [--force-formula general]
    pinvupdate generate special_pair 6 2 4 42 --out-dir fixtures/

Exit codes: 0 success, 1 hypothesis or precondition failure, 2 input error,
3 numerical failure. Reports go to stdout as JSON, logs to stderr. Paths of
the form ``fixture:<relpath>`` resolve against the bundled fixture directory
or ``--fixture-dir``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .fileformat import (
    MatrixFormatError,
    RunReport,
    matrix_to_dict,
    read_matrix,
    write_matrix,
)
from .generate import InfeasibleError, InstanceKind, generate_instance
from .matrix_core import (
    DecompositionError,
    DimensionError,
    NumericalError,
    PreconditionError,
    TolerancePolicy,
    pinv_oracle,
)
from .update_engine import check_conditions, check_rank_conditions, update

log = logging.getLogger("pinvupdate")

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3
FIXTURE_DIR = Path(__file__).parent / "fixtures"
FIXTURE_PREFIX = "fixture:"


class InputError(Exception):
    pass


def _tol(args):
    try:
        return TolerancePolicy(args.rank_rtol, args.eq_rtol, args.cond_max)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _resolve(path, args):
    if path.startswith(FIXTURE_PREFIX):
        base = Path(args.fixture_dir) if args.fixture_dir else FIXTURE_DIR
        return base / path[len(FIXTURE_PREFIX):]
    return Path(path)


def _load(path, args):
    p = _resolve(path, args)
    try:
        M, name = read_matrix(p)
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from exc
    except MatrixFormatError as exc:
        raise InputError(f"malformed matrix file {p}: {exc}") from exc
    return M, name, RunReport.describe_input(M, name, path)


def _load_triple(args):
    (A, _, ia), (X, _, ix), (Y, _, iy) = (_load(p, args) for p in (args.a, args.x, args.y))
    return A, X, Y, [ia, ix, iy]


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_pinv(args):
    tol = _tol(args)
    M, name, _ = _load(args.input, args)
    B = pinv_oracle(M, tol)
    _emit(json.dumps(matrix_to_dict(B, f"pinv({name})"), indent=1) + "\n")
    return EXIT_OK


def cmd_check(args):
    tol = _tol(args)
    A, X, Y, inputs = _load_triple(args)
    t0 = time.perf_counter()
    report = check_conditions(A, X, Y, tol)
    ranks = check_rank_conditions(A, X, Y, tol)
    out = RunReport(
        command="check",
        inputs=inputs,
        conditions=RunReport.encode_conditions(report),
        rank_conditions=list(ranks),
        wall_time="0",
    )
    if list(ranks) != [report.range_X_ok, report.range_Y_ok]:
        out.warnings.append("rank test and range-residual test disagree")
    out.wall_time = format(time.perf_counter() - t0, ".17g")
    _emit(out.to_json())
    ok = report.ranges_ok and (report.inner_regular or report.smw_core_invertible)
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_update(args):
    tol = _tol(args)
    A, X, Y, inputs = _load_triple(args)
    t0 = time.perf_counter()
    result = update(
        A, X, Y, tol,
        verify=args.verify,
        formula=args.force_formula,
        intermediates=args.intermediates,
    )
    for w in result.warnings:
        log.warning(w)
    _emit(RunReport.from_update(result, inputs, time.perf_counter() - t0).to_json())
    return EXIT_OK


def cmd_generate(args):
    try:
        A, X, Y = generate_instance(args.kind, args.m, args.n, args.r, args.seed)
    except InfeasibleError as exc:
        log.error("%s", exc)
        return EXIT_HYPOTHESIS
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files = {}
        for name, M in (("a", A), ("x", X), ("y", Y)):
            files[name] = str(out / f"{name}.json")
            write_matrix(files[name], M, name.upper())
    except OSError as exc:
        raise InputError(f"cannot write to {out}: {exc}") from exc
    _emit(json.dumps({"kind": args.kind, "m": args.m, "n": args.n, "r": args.r,
                      "seed": args.seed, "files": files}, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank-rtol", type=float, default=None,
                        help="relative singular-value cutoff (default max(rows, cols) * eps)")
    common.add_argument("--eq-rtol", type=float, default=1e-10)
    common.add_argument("--cond-max", type=float, default=1e12)
    common.add_argument("--fixture-dir", default=None,
                        help="directory that 'fixture:' paths resolve against")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pinvupdate", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pinv", parents=[common], help="SVD pseudoinverse of one matrix")
    p.add_argument("input")
    p.set_defaults(func=cmd_pinv)

    for name, func, helptext in (
        ("check", cmd_check, "evaluate the update hypotheses"),
        ("update", cmd_update, "pseudoinverse of A - XY*"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("a")
        p.add_argument("x")
        p.add_argument("y")
        p.set_defaults(func=func)
        if name == "update":
            p.add_argument("--verify", action="store_true",
                           help="compare against the SVD oracle")
            p.add_argument("--force-formula", choices=["smw", "special", "general"])
            p.add_argument("--intermediates", action="store_true",
                           help="include A^+, XY* and the inner pseudoinverses")

    p = sub.add_parser("generate", parents=[common], help="write a random (A, X, Y) triple")
    p.add_argument("kind", choices=[k.value for k in InstanceKind])
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except PreconditionError as exc:
        log.error("%s", exc)
        return EXIT_HYPOTHESIS
    except (InputError, DimensionError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (NumericalError, DecompositionError) as exc:
        log.error("%s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
