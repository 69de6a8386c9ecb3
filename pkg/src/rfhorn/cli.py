"""Command-line entry point.

Exit status: 0 when a verdict was delivered, 1 on usage, parse or input
errors, 2 when a resource cap was hit or a verification step failed.
"""

from __future__ import annotations

import argparse
import contextlib
import signal
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import check as checking
from .encode import FAMILIES, encode_file, encode_unfolding
from .errors import InputError, RecursiveSystemError, ResourceLimitError
from .frontend import (
    SourceFormat,
    parse_solution,
    parse_system,
    format_number,
    render_counterexample,
    render_solution,
    render_system,
)
from .qelim import DEFAULT_MAX_CONSTRAINTS
from .solver import InternalError, Limits, Solvable, Unsolvable, solve
from .unfold import DEFAULT_MAX_DERIVATIONS

DEFAULT_TIMEOUT = 60


class _Usage(Exception):
    pass


def _format(path: str, explicit: Optional[str]) -> SourceFormat:
    if explicit:
        return SourceFormat.parse(explicit)
    return SourceFormat.from_path(path)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _labels(text: Optional[str]) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


@contextlib.contextmanager
def _time_limit(seconds: int):
    if seconds <= 0 or not hasattr(signal, "SIGALRM"):
        yield
        return

    def expire(signum, frame):
        raise ResourceLimitError(f"time limit of {seconds}s exceeded")

    old = signal.signal(signal.SIGALRM, expire)
    signal.alarm(seconds)
    try:
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, old)


def _cmd_solve(args, out) -> int:
    fmt = _format(args.file, args.format)
    system = parse_system(_read(args.file), fmt)
    limits = Limits(args.max_derivations, args.max_constraints)
    verdict = solve(system, limits)
    if isinstance(verdict, Solvable):
        if args.check and not checking.check_solution(system, verdict.solution):
            raise InternalError("solution failed re-verification")
        text = render_solution(verdict.solution, fmt)
        out.write("sat\n" + text)
        if args.model:
            Path(args.model).write_text(text, encoding="utf-8")
    elif isinstance(verdict, Unsolvable):
        text = render_counterexample(verdict.counterexample, fmt)
        out.write("unsat\n" + text)
        if args.cex:
            Path(args.cex).write_text(text, encoding="utf-8")
    else:
        out.write("unknown\n")
        print(f"rfhorn: {verdict.reason}", file=sys.stderr)
    return 0


def _cmd_oracle(args, out) -> int:
    fmt = _format(args.file, args.format)
    system = parse_system(_read(args.file), fmt)
    verdict = checking.oracle(system, args.max_constraints)
    if verdict.solvable:
        out.write("sat\n" + render_solution(verdict.solution, fmt))
    else:
        out.write(f"unsat\n# clause {verdict.failure.clause_id} fails under the least solution\n")
    return 0


def _cmd_check(args, out) -> int:
    fmt = _format(args.system, args.format)
    system = parse_system(_read(args.system), fmt)
    sol_fmt = _format(args.solution, args.format) if args.solution.endswith(".smt2") else fmt
    sol = parse_solution(_read(args.solution), sol_fmt, system)
    result = checking.check_solution(system, sol)
    if result:
        out.write("verified\n")
        return 0
    if isinstance(result, checking.FailedWf):
        out.write(f"failed\n# no linear ranking function for {result.predicate}\n")
    else:
        point = ", ".join(
            f"{v.name} = {format_number(q)}"
            for v, q in sorted(result.model.assignment.items(), key=lambda kv: kv[0].index)
        )
        out.write(f"failed\n# clause {result.clause_id} at {point}\n")
    return 2


def _cmd_encode(args, out) -> int:
    text = _read(args.ts_file)
    if args.family == "unfold":
        if args.unfold is None:
            raise _Usage("the unfold family needs --unfold")
        source = parse_system(text, _format(args.ts_file, args.input_format))
        try:
            steps = [int(s) for s in _labels(args.unfold)]
        except ValueError:
            raise _Usage("--unfold expects comma-separated clause ids") from None
        system = encode_unfolding(source, steps)
    else:
        system = encode_file(
            args.family, text, _labels(args.path), _labels(args.stem), _labels(args.loop), args.mode
        )
    if args.output:
        fmt = _format(args.output, args.format)
        Path(args.output).write_text(render_system(system, fmt), encoding="utf-8")
    else:
        fmt = SourceFormat.parse(args.format) if args.format else SourceFormat.NATIVE
        out.write(render_system(system, fmt))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfhorn", description="Recursion-free Horn clause solver over linear rational arithmetic"
    )
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--max-derivations", type=int, default=DEFAULT_MAX_DERIVATIONS)
    caps.add_argument("--max-constraints", type=int, default=DEFAULT_MAX_CONSTRAINTS)
    caps.add_argument("--timeout", type=int, default=DEFAULT_TIMEOUT, help="seconds, 0 to disable")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [f.value for f in SourceFormat]

    p = sub.add_parser("solve", parents=[caps], help="solve a clause system")
    p.add_argument("file")
    p.add_argument("--format", choices=formats)
    p.add_argument("--check", action=argparse.BooleanOptionalAction, default=True,
                   help="re-verify sat answers before printing (default on)")
    p.add_argument("--model", metavar="OUT", help="also write the solution here")
    p.add_argument("--cex", metavar="OUT", help="also write the counterexample here")
    p.set_defaults(run=_cmd_solve)

    p = sub.add_parser("oracle", parents=[caps], help="verdict from the least solution")
    p.add_argument("file")
    p.add_argument("--format", choices=formats)
    p.set_defaults(run=_cmd_oracle)

    p = sub.add_parser("check", parents=[caps], help="check a solution against a system")
    p.add_argument("system")
    p.add_argument("solution")
    p.add_argument("--format", choices=formats)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("encode", parents=[caps], help="emit an interpolation problem as clauses")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("ts_file", metavar="ts-file")
    p.add_argument("--path", help="comma-separated transition labels")
    p.add_argument("--stem", help="comma-separated stem labels")
    p.add_argument("--loop", help="comma-separated loop labels")
    p.add_argument("--mode", choices=["exists", "forall"], default="exists")
    p.add_argument("--unfold", help="comma-separated clause ids (unfold family)")
    p.add_argument("--input-format", choices=formats, help="format of the clause file for unfold")
    p.add_argument("--format", choices=formats, help="output format")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_encode)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        with _time_limit(args.timeout):
            return args.run(args, out)
    except _Usage as e:
        print(f"rfhorn: {e}", file=sys.stderr)
        return 1
    except (InputError, RecursiveSystemError) as e:
        print(f"rfhorn: {e}", file=sys.stderr)
        return 1
    except (ResourceLimitError, InternalError) as e:
        print(f"rfhorn: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
