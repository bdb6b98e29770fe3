"""Command-line front end: eval, sweep, verify and limits.

Usage:
    python -m src.cli eval --h 3 --gamma 1 --alpha 2
    python -m src.cli sweep --h-range 0.1:4:40 --gamma-range 0.1:1:10 --alpha-list 0.5,2 --out sweep.csv
    python -m src.cli verify --suite theta
    python -m src.cli limits --h 2.01 --gamma 1 --alpha 2

Exit codes: 0 success, 1 verification failure, 2 domain or convergence error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Dict, List

from pydantic import ValidationError

from src.config import Settings, load_settings
from src.errors import ConvergenceError, DomainError
from src.models import SweepConfig, VerifyReport
from src.sweep import evaluate_row, limit_rows, limits_to_csv, parse_range, rows_to_csv, run_sweep
from src.verify import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN_ERROR = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def parse_alpha_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise DomainError(f"alpha list must be comma-separated numbers, got {text!r}") from e


def parse_overrides(items: List[str] | None) -> Dict[str, float]:
    """FAMILY=TOL pairs from repeated --override flags."""
    overrides: Dict[str, float] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise DomainError(f"override must look like FAMILY=TOL, got {item!r}")
        try:
            overrides[name] = float(value)
        except ValueError as e:
            raise DomainError(f"override tolerance is not a number: {item!r}") from e
    return overrides


def format_report(report: VerifyReport) -> str:
    lines = [f"suite: {report.suite}", f"checks_run: {report.checks_run}"]
    for family in report.families:
        status = "PASS" if family.passed else "FAIL"
        line = (
            f"{status}  {family.name:<24} checks={family.checks:<4} "
            f"max_residual={family.max_residual:.3e} tol={family.tolerance:.1e}"
        )
        if family.detail and not family.passed:
            line += f"  ({family.detail})"
        lines.append(line)
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    row = evaluate_row(args.h, args.gamma, args.alpha, settings.series_tol, args.series, settings.tie_tol)
    sys.stdout.write(rows_to_csv([row], header=args.header))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    config = SweepConfig(
        h_range=parse_range(args.h_range),
        gamma_range=parse_range(args.gamma_range),
        alpha_list=parse_alpha_list(args.alpha_list),
        out_path=args.out,
        tol=settings.series_tol,
        series=args.series,
        max_workers=settings.max_workers,
    )
    rows = run_sweep(config, settings.tie_tol)
    print(f"✅ Wrote {len(rows)} rows to {config.out_path}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    report = run_suite(args.suite, parse_overrides(args.override))
    sys.stdout.write(format_report(report))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_limits(args: argparse.Namespace, settings: Settings) -> int:
    rows = limit_rows(args.h, args.gamma, args.alpha, settings.tie_tol)
    sys.stdout.write(limits_to_csv(rows, header=args.header))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xy-renyi",
        description="Renyi entropy of the XY spin chain from elliptic, theta and modular functions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default: RENYI_LOG_LEVEL or INFO)")
    parser.add_argument("--tie-tol", type=float, default=None, help="Special-line classification tolerance (default: 1e-9)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_point_arguments(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--h", type=float, required=True, help="Transverse field h >= 0")
        sub.add_argument("--gamma", type=float, required=True, help="Anisotropy gamma > 0")
        sub.add_argument("--alpha", type=float, required=True, help="Renyi order alpha > 0")
        sub.add_argument(
            "--header", action=argparse.BooleanOptionalAction, default=True,
            help="Print the CSV header line (default: on)",
        )

    eval_parser = subparsers.add_parser("eval", help="Evaluate one point and print a CSV row")
    add_point_arguments(eval_parser)
    eval_parser.add_argument("--tol", type=float, default=None, help="Series tail tolerance (default: 1e-13)")
    eval_parser.add_argument("--series", action="store_true", help="Use the eigenvalue series instead of the closed form")
    eval_parser.set_defaults(handler=cmd_eval)

    sweep_parser = subparsers.add_parser("sweep", help="Evaluate a phase-diagram grid and write CSV")
    sweep_parser.add_argument("--h-range", required=True, metavar="MIN:MAX:STEPS")
    sweep_parser.add_argument("--gamma-range", required=True, metavar="MIN:MAX:STEPS")
    sweep_parser.add_argument("--alpha-list", required=True, metavar="A1,A2,...")
    sweep_parser.add_argument("--out", required=True, metavar="PATH", help="Output CSV file")
    sweep_parser.add_argument("--tol", type=float, default=None, help="Series tail tolerance (default: 1e-13)")
    sweep_parser.add_argument("--series", action="store_true", help="Use the eigenvalue series instead of the closed form")
    sweep_parser.add_argument("--max-workers", type=int, default=None, help="Thread pool size (default: 8)")
    sweep_parser.set_defaults(handler=cmd_sweep)

    verify_parser = subparsers.add_parser("verify", help="Run identity and oracle checks")
    verify_parser.add_argument("--suite", default="all", choices=SUITE_NAMES)
    verify_parser.add_argument(
        "--override", action="append", metavar="FAMILY=TOL",
        help="Override one family tolerance (repeatable)",
    )
    verify_parser.set_defaults(handler=cmd_verify)

    limits_parser = subparsers.add_parser("limits", help="Closed form beside the asymptotic estimates")
    add_point_arguments(limits_parser)
    limits_parser.set_defaults(handler=cmd_limits)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(
            log_level=args.log_level,
            tie_tol=args.tie_tol,
            series_tol=getattr(args, "tol", None),
            max_workers=getattr(args, "max_workers", None),
        )
    except ValidationError as e:
        print(f"error: invalid settings: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    configure_logging(settings.log_level)

    try:
        return args.handler(args, settings)
    except (DomainError, ConvergenceError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except ValidationError as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except OSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
