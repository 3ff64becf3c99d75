"""Validation aggregates: energy totals, error statistics, range summaries
and the comparison against official monthly supply figures.

Every half-hourly value is an average MW over its period, so the energy in
a bucket is sum(MW) * 0.5 MWh. Integer MW values are summed exactly before
any unit conversion to keep aggregation drift out of the comparisons.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from .calendar import CalendarTable
from .errors import ValidationError
from .quality import ErrorBlock, FlagEntry, FlagSet, enumerate_blocks

log = logging.getLogger(__name__)

MWH_PER_PERIOD_FACTOR = 0.5
GRANULARITIES = ("year", "quarter", "month")
DEFAULT_TOLERANCE_PCT = 4.0


@dataclass(frozen=True)
class EnergyAggregate:
    bucket: str
    energy_twh: float
    source_column: str


@dataclass(frozen=True)
class BeisMonthly:
    month: str  # YYYY-MM
    supply_gwh: float


@dataclass
class ComparisonResult:
    rows: list[tuple[str, float]]
    within_tolerance_share: float
    tolerance_pct: float
    note: str


@dataclass
class ErrorSummary:
    per_year: dict[str, dict[str, int]]
    totals: dict[str, int]
    total_rows: int
    histogram: dict[int, int]
    block_count: int
    blocks: list[ErrorBlock] = field(default_factory=list)

    @property
    def total_flags(self) -> int:
        return sum(self.totals.values())

    def percentage(self, source: str) -> float:
        if not self.total_rows:
            return 0.0
        return 100.0 * self.totals.get(source, 0) / self.total_rows


def _bucket(timestamp_text: str, granularity: str) -> str:
    if granularity == "year":
        return timestamp_text[:4]
    if granularity == "month":
        return timestamp_text[:7]
    if granularity == "quarter":
        quarter = (int(timestamp_text[5:7]) - 1) // 3 + 1
        return f"{timestamp_text[:4]}Q{quarter}"
    raise ValidationError(f"unknown granularity {granularity!r}")


def aggregate_energy(
    table: pd.DataFrame,
    column: str,
    granularity: str = "year",
    clock: str = "utc",
) -> list[EnergyAggregate]:
    """Energy per calendar bucket of the chosen clock, in TWh."""
    if column not in table.columns:
        raise ValidationError(f"unknown column {column!r}")
    if clock not in ("utc", "local"):
        raise ValidationError(f"clock must be 'utc' or 'local', got {clock!r}")
    ts = table["ELEXM_utc"] if clock == "utc" else table["ELEXM_localtime"]
    buckets = ts.map(lambda t: _bucket(t, granularity))
    sums = table[column].groupby(buckets).sum()
    return [
        EnergyAggregate(
            bucket=str(b),
            energy_twh=float(total) * MWH_PER_PERIOD_FACTOR / 1e6,
            source_column=column,
        )
        for b, total in sums.sort_index().items()
    ]


def read_beis_csv(source: str | Path) -> list[BeisMonthly]:
    """Minimal two-column extract (`month,supply_gwh`) of the official
    monthly electricity availability series."""
    text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["month", "supply_gwh"]:
        raise ValidationError(f"expected header 'month,supply_gwh' in {source}")
    return [BeisMonthly(row[0].strip(), float(row[1])) for row in reader if row]


def compare_beis(
    espeni_aggregates: list[EnergyAggregate],
    beis: list[BeisMonthly],
    granularity: str = "quarter",
    tolerance_pct: float = DEFAULT_TOLERANCE_PCT,
) -> ComparisonResult:
    """Percentage difference per bucket, 100 * (ours - reference) / reference.

    The reference is whichever single monthly series the caller supplies;
    the result note records that the comparison is against that series.
    """
    reference: dict[str, float] = {}
    for row in beis:
        b = _bucket(row.month + "-01", granularity)
        reference[b] = reference.get(b, 0.0) + row.supply_gwh

    rows: list[tuple[str, float]] = []
    for agg in espeni_aggregates:
        if agg.bucket not in reference or reference[agg.bucket] == 0:
            continue
        ours_gwh = agg.energy_twh * 1000.0
        pct = 100.0 * (ours_gwh - reference[agg.bucket]) / reference[agg.bucket]
        rows.append((agg.bucket, pct))
    if not rows:
        log.warning("no overlapping buckets between the two series")
        return ComparisonResult([], 0.0, tolerance_pct, "no overlap")

    within = sum(1 for _, pct in rows if abs(pct) <= tolerance_pct)
    note = (
        f"reference: user-supplied monthly supply series (GWh), "
        f"{len(rows)} overlapping {granularity} bucket(s)"
    )
    return ComparisonResult(rows, within / len(rows), tolerance_pct, note)


def _flags_from_merged(table: pd.DataFrame) -> FlagSet:
    keys = table["ELEXM_SETTLEMENT_DATE"] + "_" + table["ELEXM_SETTLEMENT_PERIOD"]
    flags = FlagSet()
    for source in ("ELEXM", "NGEM"):
        col = f"{source}_ROWFLAG"
        if col not in table.columns:
            continue
        zero = (table[col] == 0).fillna(False)
        for key in keys[zero]:
            flags.set(FlagEntry(source, key, 0))
    return flags


def error_summary(
    flags_or_table: FlagSet | pd.DataFrame,
    calendar: CalendarTable,
    total_rows: int | None = None,
) -> ErrorSummary:
    """Per-year flag counts per source, block-length histogram and the
    computed block count."""
    if isinstance(flags_or_table, pd.DataFrame):
        flags = _flags_from_merged(flags_or_table)
        total_rows = len(flags_or_table) if total_rows is None else total_rows
    else:
        flags = flags_or_table
        total_rows = total_rows or 0

    per_year: dict[str, dict[str, int]] = {}
    totals = {s: 0 for s in ("ELEXM", "NGEM")}
    for entry in flags:
        if entry.flag != 0:
            continue
        year = entry.datesp[:4]
        per_year.setdefault(year, {s: 0 for s in totals})[entry.source] += 1
        totals[entry.source] += 1

    blocks = enumerate_blocks(flags, calendar)
    histogram: dict[int, int] = {}
    for block in blocks:
        histogram[block.length] = histogram.get(block.length, 0) + 1

    return ErrorSummary(
        per_year=dict(sorted(per_year.items())),
        totals=totals,
        total_rows=total_rows,
        histogram=dict(sorted(histogram.items())),
        block_count=len(blocks),
        blocks=blocks,
    )


def range_summary(table: pd.DataFrame, columns: list[str]) -> pd.DataFrame:
    """Per-column min, max and missing count; all-missing columns keep
    min/max undefined."""
    rows = []
    for col in columns:
        if col not in table.columns:
            raise ValidationError(f"unknown column {col!r}")
        series = table[col]
        empty = series.isna().all()
        rows.append(
            {
                "column": col,
                "min": None if empty else int(series.min()),
                "max": None if empty else int(series.max()),
                "missing": int(series.isna().sum()),
            }
        )
    return pd.DataFrame(rows, columns=["column", "min", "max", "missing"])


# ---- rendering for the CLI ----


def format_error_summary(summary: ErrorSummary, fmt: str = "text") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("year", "elexm_flags", "ngem_flags"))
        for year, counts in summary.per_year.items():
            writer.writerow((year, counts.get("ELEXM", 0), counts.get("NGEM", 0)))
        writer.writerow(("total", summary.totals["ELEXM"], summary.totals["NGEM"]))
        writer.writerow(())
        writer.writerow(("block_length", "occurrences"))
        for length, count in summary.histogram.items():
            writer.writerow((length, count))
        writer.writerow(("blocks_total", summary.block_count))
        return buf.getvalue()

    lines = ["Flagged errors by year (source: ELEXM / NGEM)"]
    for year, counts in summary.per_year.items():
        lines.append(f"  {year}: {counts.get('ELEXM', 0)} / {counts.get('NGEM', 0)}")
    lines.append(
        f"  total: {summary.totals['ELEXM']} / {summary.totals['NGEM']}"
        f" of {summary.total_rows} rows"
        f" ({summary.percentage('ELEXM'):.2f}% / {summary.percentage('NGEM'):.2f}%)"
    )
    lines.append(f"Error blocks: {summary.block_count}")
    for length, count in summary.histogram.items():
        lines.append(f"  length {length}: {count}")
    return "\n".join(lines) + "\n"


def format_range_summary(report: pd.DataFrame, fmt: str = "text") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        report.to_csv(buf, index=False, lineterminator="\n", na_rep="")
        return buf.getvalue()
    lines = ["Column ranges (min / max / missing)"]
    for _, row in report.iterrows():
        lo = "-" if row["min"] is None or pd.isna(row["min"]) else int(row["min"])
        hi = "-" if row["max"] is None or pd.isna(row["max"]) else int(row["max"])
        lines.append(f"  {row['column']}: {lo} / {hi} / {int(row['missing'])}")
    return "\n".join(lines) + "\n"


def format_comparison(result: ComparisonResult, fmt: str = "text") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("bucket", "pct_diff"))
        for bucket, pct in result.rows:
            writer.writerow((bucket, f"{pct:.6g}"))
        return buf.getvalue()
    lines = [f"# {result.note}"]
    for bucket, pct in result.rows:
        lines.append(f"  {bucket}: {pct:+.2f}%")
    lines.append(
        f"within +/-{result.tolerance_pct:g}%: {100 * result.within_tolerance_share:.1f}%"
        f" of buckets"
    )
    return "\n".join(lines) + "\n"
