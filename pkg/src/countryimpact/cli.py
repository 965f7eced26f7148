"""Command-line interface.

Exit status: 0 success, 1 invalid data or configuration, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from countryimpact import __version__
from countryimpact.indicators import CountryIndicators, ca_gap_summary, select_rows
from countryimpact.io import (
    RecordFileError,
    config_hash,
    config_to_dict,
    file_sha256,
    load_config,
    read_baselines,
    write_baselines,
    write_indicator_table,
    write_records,
    write_table,
)
from countryimpact.normalization import MissingStratumError
from countryimpact.pipeline import Analysis, analyze_file, validate_file
from countryimpact.reports import (
    FIGURE_SPECS,
    Correlation,
    TooFewPointsError,
    correlate,
    figure_data,
    output_distribution,
    parse_pair,
)
from countryimpact.stats import PERCENTILE_RULE, PVALUE_METHOD
from countryimpact.synthgen import InvalidConfigError, iter_records

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
BUILTIN_CONFIGS = ("phase120",)


class UsageError(Exception):
    pass


def _warn(message: str) -> None:
    print(f"countryimpact: warning: {message}", file=sys.stderr)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _non_negative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


# --- shared plumbing ------------------------------------------------------------


def _analyze(args) -> Analysis:
    baselines = read_baselines(args.baselines) if args.baselines else None
    return analyze_file(args.input, baselines=baselines, workers=args.workers)


def _selected(args, analysis: Analysis) -> list[CountryIndicators]:
    return select_rows(analysis.rows.values(), top=args.top, min_output=args.min_output)


def _out_dir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _metadata(args, analysis: Analysis, rows: list[CountryIndicators], command: str) -> dict:
    normalization = {"baselines": "self", "strata": len(analysis.baselines)}
    if args.baselines:
        normalization = {
            "baselines": "file",
            "path": str(args.baselines),
            "sha256": file_sha256(args.baselines),
            "strata": len(analysis.baselines),
        }
    return {
        "tool": f"countryimpact {__version__}",
        "command": command,
        "input": {"path": str(args.input), "sha256": file_sha256(args.input)},
        "records": analysis.n_records,
        "years": [analysis.years[0], analysis.years[-1]] if analysis.years else None,
        "ic_records": analysis.n_ic,
        "ca_known_records": analysis.n_ca_known,
        "ca_unknown_records": analysis.ca_unknown,
        "excluded_items": analysis.excluded,
        "normalization": normalization,
        "selection": {
            "order": "output_whole descending, ties by country code",
            "top": args.top,
            "min_output": args.min_output,
            "countries_total": len(analysis.rows),
            "countries_selected": len(rows),
        },
        "percentile_rule": PERCENTILE_RULE,
        "pvalue_method": PVALUE_METHOD,
    }


def _write_json(path: Path, data: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


# --- commands -------------------------------------------------------------------


def cmd_validate(args) -> int:
    valid, problems = validate_file(args.input)
    for diag in problems:
        print(diag, file=sys.stderr)
    print(f"{valid} valid, {len(problems)} invalid")
    if valid == 0 and not problems:
        _warn(f"{args.input} contains no records")
    return EXIT_INVALID if problems else EXIT_OK


def cmd_baselines(args) -> int:
    analysis = analyze_file(args.input, workers=args.workers)
    out = _out_dir(args)
    write_baselines(out / "baselines.tsv", analysis.baselines)
    print(f"{len(analysis.baselines)} strata from {analysis.n_records} records -> {out / 'baselines.tsv'}")
    return EXIT_OK


def cmd_indicators(args) -> int:
    analysis = _analyze(args)
    rows = _selected(args, analysis)
    out = _out_dir(args)
    write_indicator_table(out / "indicators.tsv", rows)
    meta = _metadata(args, analysis, rows, "indicators")
    meta["ca_gap"] = ca_gap_summary(rows)
    _write_json(out / "indicators.meta.json", meta)
    if not rows:
        _warn("no countries pass the selection")
    print(f"{len(rows)} countries -> {out / 'indicators.tsv'}")
    return EXIT_OK


def _correlation_files(out: Path, result: Correlation) -> tuple[Path, Path]:
    stem = f"{result.x}__{result.y}"
    report = out / f"correlation_{stem}.tsv"
    scatter = out / f"scatter_{stem}.tsv"
    write_table(report, Correlation.HEADER, [result.summary_row()])
    write_table(scatter, ("country", result.x, result.y), result.points)
    return report, scatter


def cmd_correlate(args) -> int:
    try:
        pairs = [parse_pair(spec) for spec in args.pair]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    analysis = _analyze(args)
    rows = _selected(args, analysis)
    out = _out_dir(args)
    results = [correlate(rows, x, y) for x, y in pairs]
    meta = _metadata(args, analysis, rows, "correlate")
    meta["pairs"] = []
    for result in results:
        report, scatter = _correlation_files(out, result)
        if result.dropped:
            _warn(f"{result.x}:{result.y}: {result.dropped} countries dropped for undefined values")
        if result.r is None:
            _warn(f"{result.x}:{result.y}: r undefined (zero variance)")
        meta["pairs"].append({"x": result.x, "y": result.y, "report": report.name, "scatter": scatter.name})
        r = "NA" if result.r is None else f"{result.r:.4f}"
        p = "NA" if result.p is None else f"{result.p:.3g}"
        print(f"{result.x}:{result.y}  n={result.n}  r={r}  p={p}")
    _write_json(out / "correlate.meta.json", meta)
    return EXIT_OK


def cmd_report(args) -> int:
    analysis = _analyze(args)
    rows = _selected(args, analysis)
    out = _out_dir(args)
    if args.figure == "table1":
        table = output_distribution(rows, n_years=len(range(analysis.years[0], analysis.years[-1] + 1)) if analysis.years else None)
    else:
        table = figure_data(args.figure, rows, overlapping=args.overlapping)
    path = out / f"{args.figure}.tsv"
    write_table(path, table.header, table.rows)
    for note in table.notes:
        _warn(note)
    meta = _metadata(args, analysis, rows, "report")
    meta["figure"] = args.figure
    if args.figure == "fig3":
        meta["collaboration_shares"] = "overlapping" if args.overlapping else "exclusive (IC > NC > WC)"
    meta["dropped_countries"] = table.dropped
    _write_json(out / f"{args.figure}.meta.json", meta)
    print(f"{len(table.rows)} rows -> {path}")
    return EXIT_OK


def _resolve_config(name: str):
    if name in BUILTIN_CONFIGS and not Path(name).exists():
        ref = resources.files("countryimpact") / "data" / f"{name}.yaml"
        with resources.as_file(ref) as path:
            return load_config(path)
    return load_config(name)


def cmd_synth(args) -> int:
    config = _resolve_config(args.config)
    if args.seed is not None:
        config = config.with_seed(args.seed)
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    n = write_records(iter_records(config), output)
    digest = config_hash(config)
    meta = {
        "tool": f"countryimpact {__version__}",
        "command": "synth",
        "config": str(args.config),
        "config_sha256": digest,
        "seed": config.seed,
        "records": n,
        "output_sha256": file_sha256(output),
        "census_note": config.census_note,
        "resolved_config": config_to_dict(config),
    }
    _write_json(output.with_name(output.name + ".meta.json"), meta)
    print(f"{n} records -> {output}")
    print(f"config sha256 {digest}  seed {config.seed}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="countryimpact",
        description="Country-level collaboration, leadership and normalized-impact indicators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def analysis_parser(name: str, help_: str, select: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--input", required=True, help="record file (JSON Lines)")
        p.add_argument("--output-dir", default=".", help="directory for output files (default: .)")
        p.add_argument("--workers", type=_positive_int, default=1, help="parallel ingestion processes")
        if select:
            sel = p.add_mutually_exclusive_group()
            sel.add_argument("--top", type=_non_negative_int, help="keep the N largest countries by whole output")
            sel.add_argument("--min-output", type=_non_negative_float, metavar="M",
                             help="keep countries with at least M papers (whole counting)")
            norm = p.add_mutually_exclusive_group()
            norm.add_argument("--self", dest="baselines", action="store_const", const=None,
                              help="build baselines from the input itself (default)")
            norm.add_argument("--baselines", metavar="PATH", help="baselines table written by 'baselines'")
        return p

    p = sub.add_parser("validate", help="check a record file line by line")
    p.add_argument("--input", required=True, help="record file (JSON Lines)")
    p.set_defaults(func=cmd_validate)

    p = analysis_parser("baselines", "write per-stratum citation baselines of a corpus", select=False)
    p.set_defaults(func=cmd_baselines)

    p = analysis_parser("indicators", "compute the per-country indicator table")
    p.set_defaults(func=cmd_indicators)

    p = analysis_parser("correlate", "correlate two indicators across countries")
    p.add_argument("--pair", action="append", required=True, metavar="X:Y",
                   help="indicator pair such as pct_ic:pct_ca (repeatable)")
    p.set_defaults(func=cmd_correlate)

    p = analysis_parser("report", "write the data behind one figure or table")
    p.add_argument("--figure", required=True, choices=FIGURE_SPECS)
    shares = p.add_mutually_exclusive_group()
    shares.add_argument("--exclusive", dest="overlapping", action="store_false",
                        help="fig3: exclusive IC > NC > WC shares (default)")
    shares.add_argument("--overlapping", dest="overlapping", action="store_true",
                        help="fig3: non-exclusive shares")
    p.set_defaults(func=cmd_report, overlapping=False)

    p = sub.add_parser("synth", help="generate a synthetic corpus from a config")
    p.add_argument("--config", required=True,
                   help=f"YAML config path or builtin name ({', '.join(BUILTIN_CONFIGS)})")
    p.add_argument("--output", required=True, help="record file to write")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"countryimpact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RecordFileError as exc:
        for diag in exc.diagnostics:
            print(diag, file=sys.stderr)
        print(f"countryimpact: error: {len(exc.diagnostics)} invalid record(s) in {exc.path}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidConfigError as exc:
        for field_, message in exc.problems:
            print(f"{field_}: {message}", file=sys.stderr)
        print("countryimpact: error: invalid generator config", file=sys.stderr)
        return EXIT_INVALID
    except (MissingStratumError, TooFewPointsError) as exc:
        print(f"countryimpact: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        # malformed baselines tables and similar
        print(f"countryimpact: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"countryimpact: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
