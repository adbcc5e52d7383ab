"""Command-line front door: analyze, compare, and lattice model generation.

Exit codes for analyze/compare: 0 nonsingular termination (and, for
compare, equal spans), 1 input error, 2 exhausted chain, 3 level cap
reached, 4 span mismatch (compare only).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .chain import (
    TERMINATED_EXHAUSTED,
    TERMINATED_MAX_LEVEL,
    TERMINATED_NONSINGULAR,
    ChainError,
    ChainOptions,
    run_chain,
)
from .dirac import compare_spans, consistency_algorithm
from .lattice import LatticeSpec, build_schwinger
from .model import FirstOrderModel, ModelFormatError, load_model, save_model
from .reports import render_text, render_tree

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_EXHAUSTED = 2
EXIT_MAX_LEVEL = 3
EXIT_SPANS_DIFFER = 4

_TERMINATION_EXIT = {
    TERMINATED_NONSINGULAR: EXIT_OK,
    TERMINATED_EXHAUSTED: EXIT_EXHAUSTED,
    TERMINATED_MAX_LEVEL: EXIT_MAX_LEVEL,
}


def _chain_options(args) -> ChainOptions:
    return ChainOptions(
        max_level=args.max_level,
        allow_truncation=not args.no_truncation,
        truncation_mode=args.truncate,
    )


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-level", type=int, default=12, help="level cap (default 12)")
    p.add_argument(
        "--no-truncation",
        action="store_true",
        help="never retry on the column-truncated matrix",
    )
    p.add_argument(
        "--truncate",
        choices=["paper", "iterative"],
        default="paper",
        help="truncation extent: drop all auxiliary columns past level 1, or "
        "drop trailing blocks one at a time (default: paper)",
    )
    p.add_argument(
        "--format", choices=["text", "tree"], default="text", help="report format"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symchain",
        description="Exact constraint-chain analysis for first-order Lagrangians.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for randomized sampling diagnostics; the analyze, compare "
        "and lattice commands are fully deterministic and ignore it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="run the constraint chain on a model file")
    p_analyze.add_argument("model", help="model file path")
    _add_analysis_flags(p_analyze)

    p_compare = sub.add_parser(
        "compare", help="run chain and consistency oracle, compare constraint spans"
    )
    p_compare.add_argument("model", help="model file path")
    _add_analysis_flags(p_compare)

    p_lattice = sub.add_parser("lattice", help="generate a lattice model file")
    p_lattice.add_argument("builder", choices=["schwinger"], help="model family")
    p_lattice.add_argument("--sites", type=int, default=3, help="lattice sites (default 3)")
    p_lattice.add_argument(
        "--spacing", default="1", help="lattice spacing as an exact rational (default 1)"
    )
    p_lattice.add_argument(
        "--scheme",
        choices=["central", "forward"],
        default="central",
        help="difference scheme (default central; needs an odd site count)",
    )
    p_lattice.add_argument("--out", help="output model file path")
    p_lattice.add_argument(
        "--analyze",
        action="store_true",
        help="run the chain/oracle comparison on the generated model",
    )
    _add_analysis_flags(p_lattice)
    return parser


def _load(path: str) -> FirstOrderModel:
    return load_model(path)


def cmd_analyze(model: FirstOrderModel, args) -> int:
    report = run_chain(model, _chain_options(args))
    comparison = None
    oracle = None
    if report.termination.kind == TERMINATED_EXHAUSTED:
        # an exhausted chain has no completeness certificate: always
        # cross-check against the consistency oracle
        oracle = consistency_algorithm(model)
        comparison = compare_spans(report, oracle.constraints)
        if not comparison.equal:
            print(
                "warning: exhausted chain span differs from the consistency oracle",
                file=sys.stderr,
            )
    if args.format == "tree":
        sys.stdout.write(render_tree(report, comparison, oracle))
    else:
        sys.stdout.write(render_text(report, comparison, oracle))
    return _TERMINATION_EXIT[report.termination.kind]


def cmd_compare(model: FirstOrderModel, args) -> int:
    report = run_chain(model, _chain_options(args))
    oracle = consistency_algorithm(model)
    comparison = compare_spans(report, oracle.constraints)
    if args.format == "tree":
        sys.stdout.write(render_tree(report, comparison, oracle))
    else:
        sys.stdout.write(render_text(report, comparison, oracle))
    return EXIT_OK if comparison.equal else EXIT_SPANS_DIFFER


def cmd_lattice(args) -> int:
    spec = LatticeSpec(
        sites=args.sites, spacing=Fraction(args.spacing), scheme=args.scheme
    )
    model = build_schwinger(spec)
    out = args.out
    if out is None and not args.analyze:
        out = f"{model.name}.model"
    if out is not None:
        save_model(model, out)
        print(f"wrote {out} ({len(model.zeta)} coordinates, "
              f"{len(model.primaries)} primaries)", file=sys.stderr)
    if args.analyze:
        return cmd_compare(model, args)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "lattice":
            return cmd_lattice(args)
        model = _load(args.model)
        if args.command == "analyze":
            return cmd_analyze(model, args)
        return cmd_compare(model, args)
    except (ModelFormatError, ChainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
