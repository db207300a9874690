"""Command line front end.

Exit codes: 0 exact non-empty / PASS / certificate ok, 1 exact EMPTY / FAIL /
not a solution, 2 empirical, 3 box refused, 64 bad input.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from expeq.catalan import catalan_count, enumerate_noncrossing
from expeq.groups import FreeProduct, Group, InvalidGroupSpec, validate_spec
from expeq.parsing import ParseError, parse_box, parse_equation, parse_group_file, parse_semilinear, parse_solution
from expeq.semilinear import box_points, contains
from expeq.solvers import (
    BoxTooLarge,
    Empirical,
    Exact,
    NotASolution,
    default_box,
    extract_certificate,
    sample_piece_soundness,
    solve,
    solve_bounded,
)
from expeq.solvers.equation import ExponentialEquation

EXIT_OK, EXIT_FAIL, EXIT_EMPIRICAL, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    echo: list[str]
    body: list[str]
    exit_code: int
    seed: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def render(self) -> str:
        return "\n".join(self.echo + [f"# seed {self.seed}"] + self.body) + "\n"


def load_group(path: str, name: str | None) -> Group:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read group file: {exc}") from None
    try:
        groups = parse_group_file(text)
    except InvalidGroupSpec as exc:
        raise UsageError("invalid group spec:\n  " + "\n  ".join(exc.violations)) from None
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if not groups:
        raise UsageError(f"{path} defines no groups")
    if name is None:
        return list(groups.values())[-1]
    if name not in groups:
        raise UsageError(f"no group {name!r} in {path}")
    return groups[name]


def _equation(args) -> ExponentialEquation:
    G = load_group(args.group, args.name)
    try:
        return parse_equation(args.equation, G)
    except (ParseError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _box(args, eq: ExponentialEquation):
    if args.box is None:
        return default_box(eq.n)
    try:
        return parse_box(args.box, eq.n)
    except ParseError as exc:
        raise UsageError(str(exc)) from None


def _echo(args, eq: ExponentialEquation) -> list[str]:
    return [f"# group {eq.group.name} ({args.group})", f"# equation {eq.render()}",
            "# variables " + ",".join(eq.variables)]


def command_solve(args) -> RunReport:
    eq = _equation(args)
    box = _box(args, eq)
    result = solve(eq, box=box, seed=args.seed, allow_empirical=args.mode != "exact")
    body = [result.render()]
    if isinstance(result, Exact):
        bad = sample_piece_soundness(eq, result.set, samples=20, seed=args.seed)
        body.append(f"# sampled soundness: {'ok' if not bad else 'FAILED at ' + str(bad[:3])}")
        code = EXIT_FAIL if result.set.is_empty() else EXIT_OK
        if bad:
            code = EXIT_FAIL
    else:
        if args.mode == "exact":
            body = ["EMPIRICAL (not computed: --mode exact)"]
        code = EXIT_EMPIRICAL
    return RunReport(_echo(args, eq), body, code, args.seed)


def command_compare(args) -> RunReport:
    eq = _equation(args)
    box = _box(args, eq)
    oracle = set(solve_bounded(eq, box))
    if args.expected:
        try:
            claimed = parse_semilinear(Path(args.expected).read_text(), eq.n)
        except (OSError, ParseError, ValueError) as exc:
            raise UsageError(f"cannot read expected set: {exc}") from None
        label = f"expected set {args.expected}"
    else:
        result = solve(eq, box=box, seed=args.seed)
        claimed = result.set if isinstance(result, Exact) else result.candidate
        label = "EXACT" if isinstance(result, Exact) else "EMPIRICAL"
    missing = sorted(p for p in oracle if not contains(claimed, p))
    extra = sorted(p for p in box_points(box) if p not in oracle and contains(claimed, p))
    body = [f"compared {label} against the oracle on box " + ",".join(f"{lo}:{hi}" for lo, hi in box),
            f"oracle solutions: {len(oracle)}"]
    for p in missing:
        body.append("missing " + ",".join(map(str, p)))
    for p in extra:
        body.append("extra " + ",".join(map(str, p)))
    ok = not missing and not extra
    body.append("PASS" if ok else f"FAIL ({len(missing)} missing, {len(extra)} extra)")
    return RunReport(_echo(args, eq), body, EXIT_OK if ok else EXIT_FAIL, args.seed)


def command_certify(args) -> RunReport:
    eq = _equation(args)
    if not isinstance(eq.group, FreeProduct):
        raise UsageError("certify needs an equation over a free product")
    try:
        sol = parse_solution(args.solution)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if len(sol) != eq.n:
        raise UsageError(f"solution has {len(sol)} entries for {eq.n} variables")
    try:
        cert = extract_certificate(eq, sol)
    except NotASolution as exc:
        return RunReport(_echo(args, eq), ["NOT A SOLUTION", f"normal form {exc.normal_form}"],
                         EXIT_FAIL, args.seed)
    except Exception as exc:  # an unexpected failure must not look like success
        return RunReport(_echo(args, eq), [f"CERTIFICATE ERROR {exc}"], EXIT_FAIL, args.seed)
    ok = cert.passes()
    body = [cert.render(), "CERTIFIED" if ok else "CHECK FAILED"]
    return RunReport(_echo(args, eq), body, EXIT_OK if ok else EXIT_FAIL, args.seed)


def command_catalan(args) -> RunReport:
    if args.n < 0:
        raise UsageError("n must be nonnegative")
    body = [p.render() for p in enumerate_noncrossing(args.n)]
    expected = catalan_count(args.n)
    body.append(f"count {len(body)} (C_{args.n} = {expected})")
    code = EXIT_OK if len(body) - 1 == expected else EXIT_FAIL
    return RunReport([f"# catalan {args.n}"], body, code, args.seed)


def command_validate(args) -> RunReport:
    try:
        groups = parse_group_file(Path(args.file).read_text(), validate=False)
    except OSError as exc:
        raise UsageError(f"cannot read group file: {exc}") from None
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    body, ok = [], True
    for name, G in groups.items():
        bad = validate_spec(G)
        if bad:
            ok = False
            body.append(f"{name}: INVALID")
            body.extend(f"  {v}" for v in bad)
        else:
            body.append(f"{name}: ok")
    return RunReport([f"# validate-group {args.file}"], body, EXIT_OK if ok else EXIT_FAIL, args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expeq", description="Solve exponential equations over groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def equation_command(name: str, helptext: str):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("equation", help="e.g. 't * h^x1 * t * h^x2 = 1'")
        p.add_argument("--group", required=True, help="group spec file")
        p.add_argument("--name", help="group to use (default: last one defined)")
        p.add_argument("--box", help="lo:hi[,lo:hi...] (default -5:5 per variable)")
        p.add_argument("--mode", choices=["exact", "empirical"], default="empirical")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="print elapsed time on stderr")
        return p

    equation_command("solve", "solve an equation").set_defaults(func=command_solve)
    cmp_ = equation_command("compare", "compare the solver with the brute-force oracle")
    cmp_.add_argument("--expected", help="semilinear set file to compare instead of the solver")
    cmp_.set_defaults(func=command_compare)
    cert = equation_command("certify", "print a non-crossing cancellation certificate")
    cert.add_argument("--solution", required=True, help="comma separated exponents")
    cert.set_defaults(func=command_certify)

    cat = sub.add_parser("catalan", help="list the non-crossing partitions of 1..n")
    cat.add_argument("n", type=int)
    cat.add_argument("--seed", type=int, default=0)
    cat.add_argument("--timing", action="store_true")
    cat.set_defaults(func=command_catalan)

    val = sub.add_parser("validate-group", help="check group spec invariants")
    val.add_argument("file")
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--timing", action="store_true")
    val.set_defaults(func=command_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoxTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    sys.stdout.write(report.render())
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
