"""Command-line interface.

Exit statuses: 0 yes/ok, 1 no/violation, 2 input error, 3 guard exceeded.
Guard defaults can be overridden through the environment variables listed
in ``ENV_GUARDS``.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from contextlib import contextmanager

from . import __version__
from .cnf import CnfFormula, ParseError, evaluate, parse_dimacs
from .dp import DEFAULT_STATE_BUDGET, METHODS, solve_mm, solve_mmp
from .formats import FORMAT_VERSION, parse_instance, parse_solution, write_instance, write_solution
from .graph import MMPInstance, verify_mm_solution, verify_mmp_solution
from .harness import report_json, run_roundtrip
from .local_check import DEFAULT_LOCAL_GUARD
from .reduction import VARIANTS, InvalidWitness, ReductionCertificate, build_reduction, extract_assignment
from .solver import DEFAULT_MAX_VERTICES, DEFAULT_NODE_BUDGET, GuardExceeded
from .treewidth import parse_td, validate_td

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

ENV_GUARDS = {
    "node_budget": ("METRIC_MENGER_NODE_BUDGET", DEFAULT_NODE_BUDGET),
    "state_budget": ("METRIC_MENGER_STATE_BUDGET", DEFAULT_STATE_BUDGET),
    "local_guard": ("METRIC_MENGER_LOCAL_GUARD", DEFAULT_LOCAL_GUARD),
    "max_vertices": ("METRIC_MENGER_MAX_VERTICES", DEFAULT_MAX_VERTICES),
    "time_limit": ("METRIC_MENGER_TIME_LIMIT", 0),
}


class InputError(Exception):
    pass


def _env_default(name):
    var, default = ENV_GUARDS[name]
    raw = os.environ.get(var)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{var} must be an integer, got {raw!r}") from None
    if value < 0 or (value == 0 and name != "time_limit"):
        raise InputError(f"{var} must be positive, got {value}")
    return value


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _parsed(path, parser):
    try:
        return parser(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _guards(args):
    out = {}
    for name in ENV_GUARDS:
        value = getattr(args, name, None)
        out[name] = _env_default(name) if value is None else value
    return out


@contextmanager
def _time_limit(seconds):
    if not seconds:
        yield
        return

    def expire(signum, frame):
        raise GuardExceeded(f"time limit of {seconds}s exceeded")

    old = signal.signal(signal.SIGALRM, expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def cmd_reduce(args) -> int:
    phi = _parsed(args.cnf, parse_dimacs)
    try:
        inst, cert = build_reduction(phi, args.r, args.k, args.variant)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    comment = f"reduction of {os.path.basename(args.cnf)}: variant {args.variant}, r={args.r}, k={args.k}"
    _write(args.output, write_instance(inst, [comment]))
    if args.cert:
        _write(args.cert, cert.to_json() + "\n")
    return EXIT_YES


def cmd_solve(args) -> int:
    inst = _parsed(args.instance, parse_instance)
    g = _guards(args)
    td = None
    if args.td:
        td, n = _parsed(args.td, parse_td)
        if n != inst.graph.n:
            raise InputError(f"{args.td}: decomposition is for {n} vertices, instance has {inst.graph.n}")
        bad = validate_td(inst.graph, td)
        if bad is not None:
            raise InputError(f"{args.td}: invalid tree decomposition: {bad}")
    solve = solve_mmp if isinstance(inst, MMPInstance) else solve_mm
    try:
        with _time_limit(g["time_limit"]):
            out = solve(
                inst, args.method, td, node_budget=g["node_budget"], state_budget=g["state_budget"],
                local_guard=g["local_guard"], max_vertices=g["max_vertices"],
            )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write(args.output, write_solution(out.answer, out.witness))
    return EXIT_YES if out.answer else EXIT_NO


def cmd_verify(args) -> int:
    inst = _parsed(args.instance, parse_instance)
    answer, paths = _parsed(args.solution, parse_solution)
    if not answer:
        raise InputError(f"{args.solution}: solution claims 's no'; there is no witness to verify")
    verify = verify_mmp_solution if isinstance(inst, MMPInstance) else verify_mm_solution
    bad = verify(inst, paths)
    if bad is None:
        print("ok")
        return EXIT_YES
    print(f"violation: {bad}")
    return EXIT_NO


def _certificate(path):
    try:
        return ReductionCertificate.from_json(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_extract(args) -> int:
    cert = _certificate(args.certificate)
    answer, paths = _parsed(args.solution, parse_solution)
    if not answer:
        raise InputError(f"{args.solution}: solution claims 's no'; nothing to extract")
    try:
        f = extract_assignment(cert, paths)
    except InvalidWitness as exc:
        print(f"invalid witness: {exc}", file=sys.stderr)
        return EXIT_NO
    if not evaluate(CnfFormula(cert.num_vars, cert.clauses), f):
        print("invalid witness: extracted assignment does not satisfy the formula", file=sys.stderr)
        return EXIT_NO
    lits = [str(i if f[i] else -i) for i in sorted(f)]
    print("v " + " ".join(lits + ["0"]))
    return EXIT_YES


def cmd_roundtrip(args) -> int:
    g = _guards(args)
    report = run_roundtrip(
        nvars=args.nvars, nclauses=args.nclauses, rs=args.r, variants=args.variants,
        methods=args.methods, trials=args.trials, seed=args.seed, exhaustive=args.exhaustive,
        random_vars=args.random_vars, random_clauses=args.random_clauses,
        node_budget=g["node_budget"], state_budget=g["state_budget"],
    )
    _write(args.output, report_json(report))
    summary = {
        "formulas": report["formulas"],
        "disagreements": len(report["disagreements"]),
        "extraction_failures": len(report["extraction_failures"]),
        "guard_hits": len(report["guard_hits"]),
    }
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    if report["disagreements"] or report["extraction_failures"]:
        return EXIT_NO
    return EXIT_GUARD if report["guard_hits"] else EXIT_YES


def _add_guard_args(p, dp=True):
    p.add_argument("--node-budget", dest="node_budget", type=_positive,
                   help="brute-force search nodes per terminal choice")
    if dp:
        p.add_argument("--state-budget", dest="state_budget", type=_positive,
                       help="DP table entries per terminal choice")
        p.add_argument("--local-guard", dest="local_guard", type=_positive,
                       help="colourings the exhaustive local solver may enumerate")
        p.add_argument("--max-vertices", dest="max_vertices", type=_positive,
                       help="vertex limit of the brute-force solver")
        p.add_argument("--time-limit", dest="time_limit", type=_positive, help="wall-clock seconds")
    else:
        p.add_argument("--state-budget", dest="state_budget", type=_positive)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metric-menger", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"metric-menger {__version__} (file format {FORMAT_VERSION})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="build the gadget instance of a 3-CNF formula")
    p.add_argument("cnf")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--variant", choices=VARIANTS, default="deg4")
    p.add_argument("-o", "--output", help="instance file (default stdout)")
    p.add_argument("--cert", help="write the certificate JSON here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide an instance file")
    p.add_argument("instance")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--td", help="PACE .td decomposition to use instead of min-fill")
    p.add_argument("-o", "--output", help="solution file (default stdout)")
    _add_guard_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="read a satisfying assignment off a solution")
    p.add_argument("certificate")
    p.add_argument("solution")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("roundtrip", help="compare reductions against the SAT oracle")
    p.add_argument("--nvars", type=int, default=2)
    p.add_argument("--nclauses", type=int, default=2)
    p.add_argument("--exhaustive", action=argparse.BooleanOptionalAction, default=True,
                   help="include every formula of size nvars x nclauses")
    p.add_argument("--trials", type=int, default=0, help="random formulas to add")
    p.add_argument("--random-vars", type=int, help="variable bound for random formulas")
    p.add_argument("--random-clauses", type=int, help="clause bound for random formulas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, nargs="+", default=[3, 4, 5])
    p.add_argument("--variants", nargs="+", choices=VARIANTS, default=list(VARIANTS))
    p.add_argument("--methods", nargs="+", choices=METHODS, default=["auto"])
    p.add_argument("-o", "--output", help="report JSON (default stdout)")
    _add_guard_args(p, dp=False)
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
