"""Command-line interface: sweep tables, CSV emission, cross-check reports.

Exit codes: 0 success, 1 configuration/validation error, 2 cross-check
failure.
"""
from __future__ import annotations

import argparse
import sys

from . import report as report_mod
from .config import load_config
from .validation import ValidationError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loanrnpv",
        description="Profitability moments for loans and exchangeable loan "
                    "portfolios under regime-dependent default and prepayment "
                    "risk.",
    )
    parser.add_argument("--config", required=True, help="scenario JSON file")
    parser.add_argument("--csv", metavar="DIR",
                        help="also write the report tables as CSV files")
    parser.add_argument("--verify", action="store_true",
                        help="run engine cross-checks instead of the sweep")
    parser.add_argument("--mc", action="store_true",
                        help="enable the Monte Carlo cross-check")
    parser.add_argument("--seed", type=int, metavar="U64",
                        help="override the simulation seed")
    parser.add_argument("--reps", type=int, metavar="N",
                        help="override the number of replications")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        config = config.with_mc(enabled=True if args.mc else None,
                                replications=args.reps, seed=args.seed)

        if args.verify:
            verify = report_mod.run_verify(config)
            sys.stdout.write(report_mod.format_verify(verify, config))
            return 0 if verify.ok else 2

        sweep = report_mod.run_sweep(config)
        sys.stdout.write(report_mod.format_report(sweep))
        if args.csv:
            paths = report_mod.write_csv(sweep, args.csv)
            sys.stdout.write(f"\nWrote {len(paths)} CSV files to {args.csv}\n")
        if config.mc_enabled:
            checks = report_mod.mc_checks(config)
            verify = report_mod.VerifyReport(
                tuple(checks), report_mod.montecarlo.active_backend())
            sys.stdout.write("\n" + report_mod.format_verify(verify, config))
            if not verify.ok:
                return 2
        return 0
    except ValidationError as err:
        sys.stderr.write(f"error: {err}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
