"""Command-line interface.

Subcommands mirror the pipeline stages so each can be run and inspected in
isolation; `espeni run` chains them all. Exit codes: 0 ok, 1 validation or
flag conflict, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .calendar import generate_calendar, write_calendar_csv
from .config import load_config
from .errors import (
    EspeniError,
    FetchError,
    ParseError,
    PipelineError,
    SchemaError,
)
from .fetch import fetch_source
from .merge import read_espeni_csv
from .pipeline import (
    ingest_elexon,
    ingest_ng,
    load_or_generate_calendar,
    run_pipeline,
)
from .quality import FlagSet, detect_zero_drops, merge_flags, read_flag_csv, write_flag_csv
from .reporting import (
    aggregate_energy,
    compare_beis,
    error_summary,
    format_comparison,
    format_error_summary,
    format_range_summary,
    range_summary,
    read_beis_csv,
)
from .tables import read_table_csv, write_frame_csv


def _cmd_calendar(args) -> int:
    table = generate_calendar(args.start, args.end)
    n = write_calendar_csv(table, args.out)
    print(f"wrote {len(table)} entries to {args.out} ({n} bytes)")
    return 0


def _cmd_ingest(args) -> int:
    from .config import PipelineConfig

    config = PipelineConfig(calendar_path=Path(args.calendar) if args.calendar else None)
    calendar = load_or_generate_calendar(config)
    if args.source == "elexon":
        table = ingest_elexon(Path(args.dir), calendar)
    else:
        table = ingest_ng(Path(args.dir), calendar)
    n = write_frame_csv(table, args.out)
    print(f"wrote {len(table)} rows to {args.out} ({n} bytes)")
    return 0


def _cmd_detect(args) -> int:
    table = read_table_csv(args.infile)
    table.attrs["source"] = "NGEM" if "NGEM_SDSP_RAW" in table.columns else "ELEXM"
    categories = [c.strip() for c in args.categories.split(",") if c.strip()]
    auto = detect_zero_drops(table, categories)
    existing = read_flag_csv(args.flags) if Path(args.flags).is_file() else FlagSet()
    merged = merge_flags(auto, existing)
    write_flag_csv(merged, args.flags)
    print(f"{len(auto)} auto flag(s); {len(merged)} total written to {args.flags}")
    return 0


def _cmd_run(args) -> int:
    return run_pipeline(load_config(args.config))


def _cmd_stats(args) -> int:
    table = read_espeni_csv(args.raw)
    start = table["ELEXM_SETTLEMENT_DATE"].iloc[0]
    end = table["ELEXM_SETTLEMENT_DATE"].iloc[-1]
    calendar = generate_calendar(start, end)
    summary = error_summary(table, calendar)
    print(format_error_summary(summary, args.format), end="")
    power_cols = [c for c in table.columns if c.startswith("POWER_")]
    print(format_range_summary(range_summary(table, power_cols), args.format), end="")
    return 0


def _cmd_compare(args) -> int:
    table = read_espeni_csv(args.espeni)
    aggregates = aggregate_energy(
        table, "POWER_ESPENI_MW", granularity=args.granularity, clock="local"
    )
    beis = read_beis_csv(args.beis)
    result = compare_beis(aggregates, beis, granularity=args.granularity)
    print(format_comparison(result, args.format), end="")
    return 0


def _cmd_review(args) -> int:
    from .review import serve_review

    config = load_config(args.config)
    server = serve_review(config, listen=args.listen)
    host, port = server.server_address[:2]
    print(f"review service listening on http://{host}:{port}/ (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _cmd_fetch(args) -> int:
    config = load_config(args.config)
    results = fetch_source(args.source, config, force=args.force)
    for r in results:
        print(f"{r.status}: {r.path} sha256={r.digest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="espeni",
        description="Reconstruct GB half-hourly electrical demand from public data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calendar", help="generate the settlement-period calendar CSV")
    p.add_argument("--start", required=True, help="first local date, YYYY-MM-DD")
    p.add_argument("--end", required=True, help="last local date, YYYY-MM-DD")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_calendar)

    p = sub.add_parser("ingest", help="parse one source directory to a combined CSV")
    p.add_argument("source", choices=("elexon", "ng"))
    p.add_argument("--dir", required=True, help="directory of downloaded source CSVs")
    p.add_argument("--calendar", help="calendar CSV (generated on the fly if omitted)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("detect", help="propose error flags for a parsed table")
    p.add_argument("--in", dest="infile", required=True, help="parsed table CSV")
    p.add_argument("--flags", required=True, help="flag file to merge into")
    p.add_argument("--categories", default="CCGT,NUCLEAR")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("run", help="run the full pipeline")
    p.add_argument("--config", help="config file (default: $ESPENI_CONFIG)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("stats", help="error and range statistics for a raw dataset")
    p.add_argument("--raw", required=True, help="espeni_raw.csv path")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("compare", help="compare demand totals against a monthly series")
    p.add_argument("--espeni", required=True, help="espeni.csv path")
    p.add_argument("--beis", required=True, help="CSV with header month,supply_gwh")
    p.add_argument("--granularity", choices=("year", "quarter", "month"), default="quarter")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("review", help="serve the flag-review JSON API and UI")
    p.add_argument("--config", help="config file (default: $ESPENI_CONFIG)")
    p.add_argument("--listen", help="host:port (overrides config)")
    p.set_defaults(func=_cmd_review)

    p = sub.add_parser("fetch", help="download configured source files")
    p.add_argument("source", choices=("ng",))
    p.add_argument("--config", help="config file (default: $ESPENI_CONFIG)")
    p.add_argument("--force", action="store_true", help="overwrite a differing file")
    p.set_defaults(func=_cmd_fetch)

    return parser


def _exit_code(exc: Exception) -> int:
    cause = exc.cause if isinstance(exc, PipelineError) else exc
    if isinstance(cause, (ParseError, SchemaError, FetchError, OSError)):
        return 2
    return 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EspeniError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
