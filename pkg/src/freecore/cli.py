"""Command line client.

A thin in-process wrapper over the same handlers the HTTP service uses.
Inputs are JSON files; --format machine prints the payload as
deterministic sorted-key JSON, text prints the human report.

Exit codes: 0 success, 2 invalid input, 3 structurally sound input that
the calculus does not cover.
"""

from __future__ import annotations

import argparse
import sys

from .errors import OUT_OF_SCOPE, EngineError, SpecInvalid
from .schema import load_document, machine_json
from .service import handlers

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_OUT_OF_SCOPE = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="text report or deterministic JSON payload",
    )
    parser.add_argument(
        "--height",
        type=int,
        default=3,
        help="enumeration height for group element listings",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freecore",
        description="exact structure calculator for weighted free products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser(
        "compute",
        help="free product structure of two specs, or a compression scenario",
    )
    compute.add_argument("inputs", nargs="+", metavar="FILE")
    compute.add_argument(
        "--gamma-choice",
        default="smallest",
        help="linking mass policy for scenarios: smallest or explicit:<p/q>",
    )
    compute.add_argument(
        "--oracle",
        action="store_true",
        help="also run the random matrix model on the scalar atoms",
    )
    _add_common(compute)

    for name, help_text in (
        ("core", "discrete core decomposition of a pair"),
        ("centralizer", "centralizer structure of a pair"),
        ("sd", "ratio group, T set and type classification of a pair"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec1", metavar="SPEC1")
        p.add_argument("spec2", metavar="SPEC2")
        _add_common(p)

    fdim_p = sub.add_parser("fdim", help="free dimension of one or two specs")
    fdim_p.add_argument("inputs", nargs="+", metavar="SPEC")
    _add_common(fdim_p)

    oracle = sub.add_parser("oracle-check", help="run the independent cross checks")
    oracle.add_argument("--steps", type=int, default=5)
    oracle.add_argument("--samples", type=int, default=100)
    oracle.add_argument(
        "--simulate",
        action="store_true",
        help="include the random matrix atom model",
    )
    _add_common(oracle)

    return parser


def _dispatch(args: argparse.Namespace) -> tuple[dict, str]:
    if args.command == "compute":
        docs = [load_document(p) for p in args.inputs]
        if len(docs) == 1:
            return handlers.handle_compute(docs[0], None, args.gamma_choice)
        if len(docs) == 2:
            return handlers.handle_compute(
                docs[0], docs[1], args.gamma_choice, oracle=args.oracle
            )
        raise SpecInvalid("compute takes one scenario or two specs")
    if args.command == "core":
        return handlers.handle_core(
            load_document(args.spec1), load_document(args.spec2), args.height
        )
    if args.command == "centralizer":
        return handlers.handle_centralizer(
            load_document(args.spec1), load_document(args.spec2), args.height
        )
    if args.command == "sd":
        return handlers.handle_sd(
            load_document(args.spec1), load_document(args.spec2), args.height
        )
    if args.command == "fdim":
        if len(args.inputs) > 2:
            raise SpecInvalid("fdim takes one or two specs")
        return handlers.handle_fdim([load_document(p) for p in args.inputs])
    assert args.command == "oracle-check"
    return handlers.handle_oracle_check(args.steps, args.samples, args.simulate)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, text = _dispatch(args)
    except EngineError as exc:
        print(f"error [{exc.rule}]: {exc.message}", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE if isinstance(exc, OUT_OF_SCOPE) else EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(machine_json(payload) if args.format == "machine" else text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
