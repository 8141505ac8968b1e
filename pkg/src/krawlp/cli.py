"""Command-line interface.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 resource cap reached, 4 the solver returned a non-optimal status.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .errors import LevelError, PreconditionError, ResourceLimitError, UnsupportedFieldError
from .field import FieldSpec
from .hierarchy import (
    KRAW_PSEUDO,
    KRAW_PSEUDO_WEAK,
    KRAW_UNSYM,
    PARTIAL_UNSYM,
    PROGRAMS,
    Instance,
    build_program,
)
from .lattice import enumerate_subspaces
from .lp import OPTIMAL, export_text, solve, verify_optimality
from .oracle import brute_force_A, fmt_rational
from .suites import SUITES, SuiteParams, run_suite

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RESOURCE, EXIT_SOLVER = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common(p: argparse.ArgumentParser, *, d: bool = False, level: bool = False) -> None:
    p.add_argument("--q", type=int, required=True, help="field size")
    p.add_argument("--n", type=int, required=True, help="blocklength")
    if d:
        p.add_argument("--d", type=int, help="minimum distance")
    if level:
        p.add_argument("--level", type=int, help="hierarchy level (default: n)")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--max-subspaces", type=int, default=None,
                   help="subspace enumeration cap (env KRAWLP_MAX_SUBSPACES, default 100000)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krawlp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list every subspace of F_q^n")
    _common(p)

    p = sub.add_parser("oracle", help="brute-force A_q^Lin(n,d)")
    _common(p, d=True)

    p = sub.add_parser("bound", help="solve one LP of the hierarchy exactly")
    _common(p, d=True, level=True)
    p.add_argument("--program", choices=PROGRAMS, required=True)
    p.add_argument("--export", dest="export_path", help="write the model in LP text format to this path")
    p.add_argument("--max-tuples", type=int, default=None,
                   help="cap for unsymmetrized models (env KRAWLP_MAX_TUPLES, default 65536)")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    _common(p, d=True, level=True)
    p.add_argument("--epsilon", type=_rational, default=Fraction(1, 2))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--max-level", type=int, default=None,
                   help="escalation search cap (env KRAWLP_MAX_LEVEL, default 64)")
    return parser


def _emit(args: argparse.Namespace, payload: dict[str, Any], lines: list[str]) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _field(args: argparse.Namespace) -> FieldSpec:
    try:
        return FieldSpec.of(args.q)
    except (ValueError, UnsupportedFieldError) as exc:
        raise UsageError(str(exc)) from None


def _need_d(args: argparse.Namespace) -> int:
    if args.d is None:
        raise UsageError("--d is required for this command")
    if args.d < 1:
        raise UsageError("--d must be at least 1")
    return args.d


def cmd_enumerate(args: argparse.Namespace) -> int:
    lat = enumerate_subspaces(_field(args), args.n, args.max_subspaces)
    payload = {"q": args.q, "n": args.n,
               "subspaces": [{"id": i, "dim": s.dim, "basis": s.rows()} for i, s in enumerate(lat.spaces)]}
    _emit(args, payload, lat.dump_lines())
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    spec = _field(args)
    d = _need_d(args)
    lat = enumerate_subspaces(spec, args.n, args.max_subspaces)
    rep = brute_force_A(Instance(spec, args.n, d, args.n), lat)
    witness = lat.spaces[rep.witness].rows()
    payload = {"A": str(rep.A), "k0": rep.k0, "witness": witness, "witness_id": rep.witness}
    _emit(args, payload, [f"A: {rep.A}", f"k0: {rep.k0}", f"witness: {','.join(witness) or '-'}",
                          f"witness_id: {rep.witness}"])
    return EXIT_OK


def _integer_root(value: Fraction, q: int, level: int) -> int | None:
    if value.denominator != 1 or value <= 0:
        return None
    v, e = value.numerator, 0
    while v % q == 0:
        v //= q
        e += 1
    if v != 1 or e % level:
        return None
    return q ** (e // level)


def cmd_bound(args: argparse.Namespace) -> int:
    spec = _field(args)
    d = _need_d(args)
    level = args.level if args.level is not None else args.n
    if args.program in (KRAW_UNSYM, PARTIAL_UNSYM) and spec.q != 2:
        raise UsageError(f"{args.program} is available for q=2 only")
    try:
        inst = Instance(spec, args.n, d, level)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lat = enumerate_subspaces(spec, args.n, args.max_subspaces)
    k0 = brute_force_A(inst, lat).k0 if args.program.endswith("-weak") else None
    lp = build_program(args.program, inst, lat, k0=k0, max_tuples=args.max_tuples)
    if args.export_path:
        with open(args.export_path, "w") as fh:
            fh.write(export_text(lp))
    sol = solve(lp)
    payload: dict[str, Any] = {"program": args.program, "q": args.q, "n": args.n, "d": d, "level": level,
                               "status": sol.status, "variables": len(lp.variables),
                               "constraints": len(lp.constraints)}
    lines = [f"program: {args.program}", f"status: {sol.status}"]
    if sol.status != OPTIMAL:
        payload["certificate_kind"] = sol.certificate_kind
        payload["certificate"] = {k: fmt_rational(v) for k, v in sorted(sol.dual.items())}
        lines.append(f"certificate_kind: {sol.certificate_kind}")
        lines += [f"  {k}: {fmt_rational(v)}" for k, v in sorted(sol.dual.items())]
        _emit(args, payload, lines)
        return EXIT_SOLVER
    certified = verify_optimality(lp, sol)
    payload["value"] = fmt_rational(sol.objective_value)
    payload["certified"] = certified
    lines += [f"value: {sol.objective_value}", f"certified: {str(certified).lower()}"]
    if args.program in (KRAW_PSEUDO, KRAW_PSEUDO_WEAK, KRAW_UNSYM):
        root = _integer_root(sol.objective_value, spec.q, level)
        payload["root"] = None if root is None else str(root)
        if root is not None:
            lines.append(f"root: {root}")
    _emit(args, payload, lines)
    return EXIT_OK if certified else EXIT_SOLVER


def cmd_verify(args: argparse.Namespace) -> int:
    _field(args)
    if args.d is not None and args.d < 1:
        raise UsageError("--d must be at least 1")
    if args.suite == "charsum" and args.q != 2:
        raise UsageError("charsum is available for q=2 only")
    params = SuiteParams(q=args.q, n=args.n, d=args.d, level=args.level, epsilon=args.epsilon, seed=args.seed,
                         samples=args.samples, max_subspaces=args.max_subspaces, max_level=args.max_level)
    try:
        result = run_suite(args.suite, params)
    except (PreconditionError, LevelError) as exc:
        raise UsageError(str(exc)) from None
    payload = {"suite": result.suite, "passed": result.passed,
               "checks": [c.as_dict() for c in result.checks],
               "reports": [r.as_dict() for r in result.reports]}
    lines = [c.line() for c in result.checks]
    for rep in result.reports:
        lines += ["", rep.as_text()]
    lines += ["", f"suite {result.suite}: {'PASS' if result.passed else 'FAIL'}"]
    _emit(args, payload, lines)
    return EXIT_OK if result.passed else EXIT_CHECK


COMMANDS = {"enumerate": cmd_enumerate, "oracle": cmd_oracle, "bound": cmd_bound, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"krawlp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LevelError, UnsupportedFieldError) as exc:
        print(f"krawlp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"krawlp: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
