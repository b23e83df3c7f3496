"""Command-line front end.

    ghzdiscord sweep --family werner-ghz --n 3 --mu 0.5 --channels ad,pf \\
        --p-grid 0:1:11 --measures qd,gqd-hs --out sweep.csv
    ghzdiscord validate-tables --out report.txt --strict
    ghzdiscord figure fig1a --out fig1a.csv

Exit codes: 0 success, 1 table validation failure under ``--strict``,
2 configuration or I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .errors import DiscordError
from .sweep import (
    FIGURES,
    SweepConfig,
    config_from_mapping,
    emit_csv,
    emit_validation,
    load_config_file,
    parse_grid,
    rows_to_csv,
    run_sweep,
    validate_tables,
    validation_text,
)

EXIT_OK, EXIT_VALIDATION, EXIT_ERROR = 0, 1, 2


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["werner-ghz", "rindler"])
    p.add_argument("--n", type=int, help="qubit count for the Werner-GHZ family")
    p.add_argument("--mu", help="Werner-GHZ mixing weight")
    p.add_argument("--channels", help="comma list, e.g. amplitude-damping,bit-flip (or ad,bf)")
    p.add_argument("--p-grid", help="start:stop:count or comma list")
    p.add_argument("--r-grid", help="start:stop:count or comma list; accepts pi/4 style values")
    p.add_argument("--measures", help="comma list of qd,gqd-hs,gqd-entropic,gqd-closed")
    p.add_argument("--workers", type=int, help="worker processes for grid points")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--out", help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzdiscord",
        description="Multipartite quantum discord of GHZ-type states under decoherence.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    _add_sweep_flags(sweep)

    val = sub.add_parser("validate-tables", help="compare closed forms with numerical minima")
    val.add_argument("--out", default="table_validation.txt",
                     help="text report path; a .csv twin is written alongside")
    val.add_argument("--families", default="werner-ghz-3,werner-ghz-6,rindler")
    val.add_argument("--p-grid", help="override the p grid (default 0:1:11)")
    val.add_argument("--strict", action="store_true",
                     help="exit 1 when any row FAILs (discrepant rows excluded)")

    fig = sub.add_parser("figure", help="run a named figure preset")
    fig.add_argument("name", choices=sorted(FIGURES))
    _add_sweep_flags(fig)
    return parser


def _flag_mapping(args) -> dict:
    keys = ["family", "n", "mu", "channels", "p_grid", "r_grid", "measures", "workers", "out"]
    return {k: getattr(args, k, None) for k in keys}


def _resolve(args, base: SweepConfig) -> SweepConfig:
    cfg = base
    if args.config:
        cfg = config_from_mapping(load_config_file(args.config), cfg)
    return config_from_mapping(_flag_mapping(args), cfg).validate()


def _run_sweep(cfg: SweepConfig) -> int:
    rows = run_sweep(cfg)
    if cfg.out:
        emit_csv(rows, cfg.out)
        print(f"wrote {len(rows)} rows to {cfg.out}", file=sys.stderr)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "sweep":
            return _run_sweep(_resolve(args, SweepConfig()))
        if args.command == "figure":
            return _run_sweep(_resolve(args, replace(FIGURES[args.name], out=f"{args.name}.csv")))
        families = [f.strip() for f in args.families.split(",") if f.strip()]
        kwargs = {"p_grid": parse_grid(args.p_grid)} if args.p_grid else {}
        rows = validate_tables(families, **kwargs)
        text_path, csv_path = emit_validation(rows, args.out)
        sys.stdout.write(validation_text(rows))
        print(f"wrote {text_path} and {csv_path}", file=sys.stderr)
        if args.strict and any(r.status == "FAIL" for r in rows):
            return EXIT_VALIDATION
        return EXIT_OK
    except (DiscordError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
