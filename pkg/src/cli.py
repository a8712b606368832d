import argparse
import logging
import sys
from typing import List, Optional

from .config import settings
from .localsing import TruncationTooSmall
from .models.report import Report
from .services.document_loader import document_loader
from .services.verification_service import INPUT_ERRORS, VerificationServiceError, verification_service

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_TRUNCATION = 3


def _at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {value}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="residuum",
        description="Exact verification of k-differentials, residue balancing and conductor descent on singular curves",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, needs_file: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        if needs_file:
            sub.add_argument("file", help="Curve document (JSON)")
        sub.add_argument("--json", action="store_true", help="Emit the machine-readable report")
        return sub

    command("graph-invariants", "Betti number, genera and dimension counts of the dual graph")

    check = command("check-balance", "Per-edge and per-component residue balancing")
    check.add_argument("--k", type=_at_least(1), default=None, help="Tensor power of the differential to check")
    check.add_argument("--trials", type=_at_least(0), default=0, help="Also run a random equivalence probe")
    check.add_argument("--seed", type=int, default=None, help="Probe seed")

    construct = command("construct", "Build the edge-parametrized global differential")
    construct.add_argument("--k", type=_at_least(1), default=None, help="Tensor power")
    construct.add_argument("--params", default=None, help="Edge parameters, e.g. e12=1,e23=2/3")

    command("span", "Dualizing sections, residue matrix rank and dimension report")

    conductor = subparsers.add_parser("conductor", help="Conductor exponents and descent verdicts at a singularity")
    conductor.add_argument("file", nargs="?", default=None, help="Curve document with custom singularities (optional)")
    conductor.add_argument("--singularity", required=True, help="Catalog name or document singularity id")
    conductor.add_argument("--differential", default=None, help="Per-branch Laurent text in t, separated by ','")
    conductor.add_argument("--k", type=_at_least(1), default=None, help="Tensor power")
    conductor.add_argument("--trunc", type=_at_least(2), default=None, help="Series truncation order")
    conductor.add_argument("--json", action="store_true", help="Emit the machine-readable report")

    descent = command("descent-global", "Global conductor descent on a rational curve with placed singularities")
    descent.add_argument("--trunc", type=_at_least(2), default=None, help="Series truncation order")

    selftest = command("selftest", "Run the acceptance suite", needs_file=False)
    selftest.add_argument("--trials", type=_at_least(1), default=None, help="Equivalence probe trials per graph")
    selftest.add_argument("--seed", type=int, default=None, help="Seed for every random draw")
    return parser


def run_command(args: argparse.Namespace) -> Report:
    if args.command == "selftest":
        return verification_service.selftest(trials=args.trials, seed=args.seed)
    if args.command == "conductor":
        document = document_loader.load_path(args.file) if args.file else None
        return verification_service.conductor(document, args.singularity, args.differential, args.k, args.trunc)
    document = document_loader.load_path(args.file)
    if args.command == "graph-invariants":
        return verification_service.graph_invariants(document)
    if args.command == "check-balance":
        return verification_service.check_balance(document, k=args.k, trials=args.trials, seed=args.seed)
    if args.command == "construct":
        return verification_service.construct(document, k=args.k, params=args.params)
    if args.command == "span":
        return verification_service.span(document)
    if args.command == "descent-global":
        return verification_service.descent_global(document, trunc=args.trunc)
    raise ValueError(f"Unknown command {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        report = run_command(args)
    except TruncationTooSmall as e:
        logger.warning(f"Truncation too small: {e}")
        print(f"error: {e}\nhint: raise --trunc and run again", file=sys.stderr)
        return EXIT_TRUNCATION
    except INPUT_ERRORS as e:
        logger.warning(f"Rejected input: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except VerificationServiceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(report.render_json() if args.json else report.render_text())
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
