"""Command-line entry point.

Exit codes: 0 success, 1 unreadable/malformed input or bad flags,
2 circuit-pair validation failure, 3 infeasible halting match.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import report as rpt
from .analysis import distinguishability
from .circuits import CircuitPair, generate_matched_pair, parse_pair, serialize_pair
from .errors import (
    ConfigurationError,
    InfeasibleMatchError,
    ParseError,
    ValidationError,
)
from .matching import match_pair
from .simulation import simulate_pair
from .witness import WitnessConfig, run_witness

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
GENERATE_ATTEMPTS = 16


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which would collide with validation failures.
    def error(self, message: str):
        raise _UsageError(message)


def paper_example_document() -> str:
    return resources.files("logdepth").joinpath("data/paper_example.json").read_text("utf-8")


def _load_pair(args: argparse.Namespace) -> CircuitPair:
    if args.paper_example:
        return parse_pair(paper_example_document())
    text = Path(args.input).read_text(encoding="utf-8")
    return parse_pair(text)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="circuit-pair JSON document")
    src.add_argument("--paper-example", action="store_true", help="use the built-in 4-branch example")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", metavar="PATH", help="write here instead of standard output")
    p.add_argument("--format", choices=("table", "machine"), default="table")


def _add_witness(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", type=float, default=0.5, help="C-PHASE coupling angle (rad)")
    p.add_argument(
        "--witness-model", choices=("semiclassical", "full-unitary"), default="semiclassical"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logdepth", description="Logical-depth entropy analysis of circuit pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="full pipeline: match, simulate, entropy, witness")
    _add_source(p)
    p.add_argument("--gamma", type=float, default=0.17, help="effective dephasing strength")
    _add_witness(p)
    p.add_argument("--no-match", action="store_true", help="keep the shallow steering angle as given")
    _add_output(p)

    p = sub.add_parser("table", help="branch distinguishability table")
    _add_source(p)
    p.add_argument("--shallow", action="store_true", help="tabulate the shallow path instead")
    _add_output(p)

    p = sub.add_parser("witness", help="ancilla witness purities")
    _add_source(p)
    _add_witness(p)
    p.add_argument("--no-match", action="store_true")
    _add_output(p)

    p = sub.add_parser("match", help="solve the shallow steering angle")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("generate", help="emit a random complexity-matched pair document")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", metavar="PATH")
    return parser


def _witness_config(args: argparse.Namespace) -> WitnessConfig:
    return WitnessConfig(phi=args.phi, model=args.witness_model)


def cmd_analyze(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    result = rpt.analyze(pair, gamma=args.gamma, witness_config=_witness_config(args), match=not args.no_match)
    if args.format == "machine":
        _emit(rpt.dumps(rpt.report_to_dict(result)), args.output)
    else:
        _emit(rpt.render_report(result), args.output)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    D = distinguishability(simulate_pair(pair), shallow=args.shallow)
    if args.format == "machine":
        _emit(rpt.dumps({"distinguishability": rpt.distinguishability_rows(D)}), args.output)
    else:
        _emit(rpt.render_table(D), args.output)
    return EXIT_OK


def cmd_witness(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    if not args.no_match:
        pair, _ = match_pair(pair)
    w = run_witness(pair, _witness_config(args))
    if args.format == "machine":
        _emit(rpt.dumps({"witness": rpt.witness_section(w)}), args.output)
    else:
        _emit(rpt.render_witness(w), args.output)
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    pair = _load_pair(args)
    matched, result = match_pair(pair)
    trace = simulate_pair(matched)
    if args.format == "machine":
        _emit(rpt.dumps({"halting": rpt.match_section(matched, result, trace)}), args.output)
    else:
        _emit(rpt.render_match(matched, result, trace), args.output)
    return EXIT_OK


def _sub_seed(seed: int, attempt: int) -> int:
    if attempt == 0:
        return seed
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def cmd_generate(args: argparse.Namespace) -> int:
    last_error: Optional[InfeasibleMatchError] = None
    for attempt in range(GENERATE_ATTEMPTS):
        pair = generate_matched_pair(_sub_seed(args.seed, attempt), args.m, args.n, args.t)
        try:
            pair, _ = match_pair(pair)
        except InfeasibleMatchError as exc:
            last_error = exc
            continue
        _emit(serialize_pair(pair), args.output)
        return EXIT_OK
    print(f"error: no solvable pair after {GENERATE_ATTEMPTS} attempts: {last_error}", file=sys.stderr)
    return EXIT_INFEASIBLE


COMMANDS = {
    "analyze": cmd_analyze,
    "table": cmd_table,
    "witness": cmd_witness,
    "match": cmd_match,
    "generate": cmd_generate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"parse error at {exc.path or '$'}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"validation error ({exc.invariant}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleMatchError as exc:
        print(f"infeasible matching: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
