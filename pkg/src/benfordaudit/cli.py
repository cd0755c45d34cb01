"""Command-line interface: ``analyze`` datasets, ``generate`` synthetic ones."""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __about__
from . import _backend
from .conformance import Conformity, Thresholds, critical_value_df8
from .datamodel import apply_remap, build_panel, load_remap_config, parse_dataset
from .errors import BenfordAuditError, DatasetError
from .pipeline import run_audit
from .regions import cluster_of
from .reporting import FORMATS, render_text_report, write_outputs
from .synthesis import GeneratorKind, GeneratorSpec, generate_panel, write_dataset

ENV_OUT = "BENFORDAUDIT_OUT"
DEFAULT_OUT = "benfordaudit_out"
NATIONAL_GROUP = "ALL"


class _Parser(argparse.ArgumentParser):
    # usage problems are operational errors (exit 1); exit 2 is reserved
    # for a nonconforming finding under --fail-on-nonconforming
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_years(text: str) -> list:
    """Accept '2007:2011' (inclusive) or '2007,2009,2010'."""
    text = text.strip()
    try:
        if ":" in text:
            first, last = text.split(":")
            first, last = int(first), int(last)
            if last < first:
                raise ValueError
            return list(range(first, last + 1))
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected FIRST:LAST or a comma-separated year list, got {text!r}"
        ) from None


def _parse_formats(text: str) -> list:
    formats = [part.strip() for part in text.split(",") if part.strip()]
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown format(s) {sorted(unknown)}; choose from {', '.join(FORMATS)}"
        )
    return formats or ["text"]


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="benfordaudit",
        description="Test grouped monetary datasets against the first-digit law.",
    )
    parser.add_argument("--version", action="version",
                        version=f"{__about__.NAME} {__about__.VERSION}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    an = sub.add_parser("analyze", help="audit a dataset CSV",
                        description="Parse, remap, group and test a dataset; "
                                    "write reports to the output directory.")
    an.add_argument("--input", required=True, help="dataset CSV to audit")
    an.add_argument("--remap", help="JSON remap configuration (structure changes)")
    an.add_argument("--years", type=_parse_years,
                    help="window as FIRST:LAST or comma list (default: all years)")
    an.add_argument("--group-by", choices=("region", "cluster", "national"),
                    default="region",
                    help="analysis grouping level (default: region)")
    an.add_argument("--alpha-strict", type=float, default=0.05,
                    help="significance of the nonconforming boundary (default 0.05)")
    an.add_argument("--alpha-lenient", type=float, default=0.10,
                    help="significance of the conforming boundary (default 0.10)")
    an.add_argument("--chi2-strict", type=float,
                    help="explicit strict critical value (overrides --alpha-strict)")
    an.add_argument("--chi2-lenient", type=float,
                    help="explicit lenient critical value (overrides --alpha-lenient)")
    an.add_argument("--band-multiplier", type=float, default=1.0,
                    help="confidence band half-width multiplier (default 1.0)")
    an.add_argument("--format", type=_parse_formats, default=["text"],
                    dest="formats", metavar="FMT[,FMT...]",
                    help=f"output formats: {', '.join(FORMATS)} (default text)")
    an.add_argument("--out", help=f"output directory (default ${ENV_OUT} "
                                  f"or ./{DEFAULT_OUT})")
    an.add_argument("--fail-on-nonconforming", action="store_true",
                    help="exit with status 2 when any group is nonconforming")
    an.add_argument("--backend", choices=_backend.BACKEND_NAMES,
                    help="kernel backend (default: numba if available)")
    an.add_argument("--verbose", action="store_true", help="log progress details")

    gen = sub.add_parser("generate", help="write a synthetic dataset CSV",
                         description="Generate reproducible synthetic amounts "
                                     "and write them as a dataset.")
    gen.add_argument("--kind", required=True,
                     choices=[k.value for k in GeneratorKind],
                     help="generator family")
    gen.add_argument("--n", required=True, type=int, help="amounts per year")
    gen.add_argument("--seed", type=int, default=0, help="stream seed (default 0)")
    gen.add_argument("--decades", type=int, default=6,
                     help="orders of magnitude spanned (default 6)")
    gen.add_argument("--tamper-fraction", type=float, default=0.0,
                     help="mixture tampering probability (mixture kind only)")
    gen.add_argument("--years", type=_parse_years, default=[2011],
                     help="years to generate (default 2011)")
    gen.add_argument("--region", default="SYN", help="region code to stamp")
    gen.add_argument("--out", required=True, help="dataset CSV to write")
    gen.add_argument("--backend", choices=_backend.BACKEND_NAMES,
                     help="kernel backend (default: numba if available)")
    gen.add_argument("--verbose", action="store_true", help="log progress details")

    return parser


def _regroup(records, level):
    if level == "region":
        return records
    from dataclasses import replace
    if level == "national":
        return [replace(r, region_code=NATIONAL_GROUP) for r in records]
    return [replace(r, region_code=cluster_of(r.region_code)) for r in records]


def _thresholds(args) -> Thresholds:
    strict = args.chi2_strict
    lenient = args.chi2_lenient
    if strict is None:
        strict = critical_value_df8(args.alpha_strict)
    if lenient is None:
        lenient = critical_value_df8(args.alpha_lenient)
    return Thresholds(chi2_strict=strict, chi2_lenient=lenient,
                      alpha_strict=args.alpha_strict,
                      alpha_lenient=args.alpha_lenient)


def _cmd_analyze(args) -> int:
    records = parse_dataset(args.input)
    if args.remap:
        records = apply_remap(records, load_remap_config(args.remap))
    records = _regroup(records, args.group_by)
    panel = build_panel(records)
    audit = run_audit(
        panel,
        years=args.years,
        thresholds=_thresholds(args),
        band_multiplier=args.band_multiplier,
    )
    outdir = args.out or os.environ.get(ENV_OUT) or DEFAULT_OUT
    written = write_outputs(audit, outdir, args.formats, grouping=args.group_by)

    if "text" in args.formats:
        print(render_text_report(audit, grouping=args.group_by), end="")
    flagged = sum(1 for rep in audit.reports
                  if rep.result.classification is Conformity.NONCONFORMING)
    print(f"analyzed {len(audit.reports)} group(s); {flagged} nonconforming; "
          f"wrote {len(written)} file(s) to {outdir}")
    if flagged and args.fail_on_nonconforming:
        return 2
    return 0


def _cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=GeneratorKind(args.kind),
        n=args.n,
        decades=args.decades,
        tamper_fraction=args.tamper_fraction,
        seed=args.seed,
    )
    records = generate_panel(spec, args.years, region_code=args.region)
    write_dataset(records, args.out)
    print(f"wrote {len(records)} record(s) "
          f"({args.n} amounts x {len(args.years)} year(s)) to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.backend:
            _backend.select(args.backend)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_generate(args)
    except DatasetError as exc:
        print(f"error: {len(exc.errors)} problem(s) in the dataset", file=sys.stderr)
        for sub in exc.errors[:20]:
            print(f"  {sub}", file=sys.stderr)
        if len(exc.errors) > 20:
            print(f"  ... and {len(exc.errors) - 20} more", file=sys.stderr)
        return 1
    except (BenfordAuditError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
