"""Ingest of Elexon generation-by-fuel-type half-hourly files.

The annual fuelhh CSVs are manual downloads from the Elexon portal: UTF-8,
comma separated, header row starting `#Settlement Date`. The column set has
grown over the years (BIOMASS from the 2017 file, INTNEM from 2018, INTELEC /
INTIFA2 / INTNSL from 2020), so parsing keeps whichever fuel columns a file
declares and leaves the rest missing. Values are average MW over the
settlement period, floored at zero by the source.
"""

from __future__ import annotations

import glob as globmod
import io
import re
from pathlib import Path

import pandas as pd

from .calendar import CalendarTable
from .errors import CoverageError, IngestGapError, SchemaError, ValidationError
from .quality import interpolate_block
from .tables import coerce_int_column

SOURCE = "ELEXM"

# Fuel columns in the order the newest source files declare them.
FUEL_ORDER = (
    "CCGT",
    "OIL",
    "COAL",
    "NUCLEAR",
    "WIND",
    "PS",
    "NPSHYD",
    "OCGT",
    "OTHER",
    "INTFR",
    "INTIRL",
    "INTNED",
    "INTEW",
    "INTELEC",
    "INTIFA2",
    "INTNSL",
    "BIOMASS",
    "INTNEM",
)

INTERCONNECTOR_FUELS = (
    "INTFR",
    "INTIRL",
    "INTNED",
    "INTEW",
    "INTELEC",
    "INTIFA2",
    "INTNSL",
    "INTNEM",
)

# Categories that never legitimately drop to zero at national level.
ALWAYS_ON_CATEGORIES = ("CCGT", "NUCLEAR")

KEY_PATTERN = re.compile(r"^\d{4}-\d{2}-\d{2}_\d{2}$")


def power_column(source: str, name: str) -> str:
    return f"POWER_{source}_{name}_MW"


def strip_power_column(column: str, source: str) -> str:
    """Inverse of power_column; raises if the column is not a power column."""
    prefix, suffix = f"POWER_{source}_", "_MW"
    if not (column.startswith(prefix) and column.endswith(suffix)):
        raise ValidationError(f"not a {source} power column: {column}")
    return column[len(prefix) : -len(suffix)]


def normalize_header(name: str) -> str:
    return name.upper().strip().replace("#", "").replace(" ", "_")


def _as_buffer(content: bytes | str | io.IOBase):
    if isinstance(content, bytes):
        return io.BytesIO(content)
    if isinstance(content, str):
        return io.StringIO(content)
    return content


def parse_fuelhh_file(content: bytes | str | io.IOBase, filename: str) -> pd.DataFrame:
    """Parse one annual fuelhh CSV into a raw table.

    Headers are canonicalised (uppercase, whitespace stripped, `#` removed,
    spaces to underscores); fuel values become nullable integers with empty
    cells kept missing rather than zeroed.
    """
    df = pd.read_csv(_as_buffer(content), dtype=str, encoding="utf-8", keep_default_na=False)
    df = df.rename(columns=normalize_header)
    for required in ("SETTLEMENT_DATE", "SETTLEMENT_PERIOD"):
        if required not in df.columns:
            raise SchemaError(f"{filename}: missing column {required}")
    for col in df.columns:
        if col in ("SETTLEMENT_DATE", "SETTLEMENT_PERIOD"):
            df[col] = df[col].astype(str).str.strip()
        else:
            df[col] = coerce_int_column(df[col], col, filename)
    df.attrs["source_filename"] = filename
    return df


def normalize_periods(raw: pd.DataFrame) -> pd.DataFrame:
    """Zero-pad periods to two-character text and build the canonical key."""
    df = raw.copy()
    df.attrs.update(raw.attrs)
    periods = pd.to_numeric(df["SETTLEMENT_PERIOD"], errors="coerce")
    if periods.isna().any() or (periods < 1).any() or (periods > 50).any():
        bad = df["SETTLEMENT_PERIOD"][periods.isna() | (periods < 1) | (periods > 50)]
        raise ValidationError(
            f"settlement period outside 1..50: {bad.iloc[0]!r} "
            f"(data row {int(bad.index[0]) + 1})"
        )
    df["SETTLEMENT_PERIOD"] = periods.astype(int).astype(str).str.zfill(2)
    df["SDSP_RAW"] = df["SETTLEMENT_DATE"] + "_" + df["SETTLEMENT_PERIOD"]
    return df


def _order_raw_columns(df: pd.DataFrame, fuel_order: tuple[str, ...]) -> pd.DataFrame:
    lead = ["SETTLEMENT_DATE", "SETTLEMENT_PERIOD", "SDSP_RAW"]
    fuels = [c for c in fuel_order if c in df.columns]
    extra = [c for c in df.columns if c not in lead and c not in fuels]
    return df[lead + fuels + extra]


def _check_coverage(keys: pd.Series, calendar: CalendarTable) -> None:
    unknown = [k for k in keys if k not in calendar]
    if unknown:
        shown = ", ".join(unknown[:10])
        more = "" if len(unknown) <= 10 else f" (+{len(unknown) - 10} more)"
        raise CoverageError(
            f"keys not covered by the calendar: {shown}{more}", keys=unknown
        )


def _recreate_missing_rows(
    df: pd.DataFrame, calendar: CalendarTable, power_cols: list[str]
) -> pd.DataFrame:
    """Re-create single missing keys between the first and last observed key.

    Each power value is the rounded midpoint of the neighbouring rows. Runs
    of two or more missing keys abort: the published files only ever lose a
    single row at a year end, so longer gaps signal a corrupt download.
    """
    expected = calendar.keys_between(df["SDSP_RAW"].iloc[0], df["SDSP_RAW"].iloc[-1])
    present = set(df["SDSP_RAW"])
    missing = [k for k in expected if k not in present]
    if not missing:
        return df

    positions = {k: i for i, k in enumerate(expected)}
    runs: list[list[str]] = [[missing[0]]]
    for key in missing[1:]:
        if positions[key] == positions[runs[-1][-1]] + 1:
            runs[-1].append(key)
        else:
            runs.append([key])
    long_runs = [r for r in runs if len(r) > 1]
    if long_runs:
        raise IngestGapError(
            f"{len(long_runs)} gap(s) longer than one row, first: "
            f"{long_runs[0][0]}..{long_runs[0][-1]} "
            f"(length {len(long_runs[0])}); re-download the source files"
        )

    by_key = df.set_index("SDSP_RAW", drop=False)
    new_rows = []
    for key in missing:
        prev_key = expected[positions[key] - 1]
        next_key = expected[positions[key] + 1]
        entry = calendar.lookup(key)
        row: dict[str, object] = {
            "SETTLEMENT_DATE": entry.key.settlement_date.isoformat(),
            "SETTLEMENT_PERIOD": f"{entry.key.settlement_period:02d}",
            "SDSP_RAW": key,
        }
        for col in power_cols:
            a = by_key.at[prev_key, col]
            b = by_key.at[next_key, col]
            a = None if pd.isna(a) else int(a)
            b = None if pd.isna(b) else int(b)
            row[col] = interpolate_block(a, b, 1)[0]
        new_rows.append(row)

    extra = pd.DataFrame(new_rows)
    for col in power_cols:
        extra[col] = extra[col].astype("Int64")
    out = pd.concat([df, extra], ignore_index=True)
    return out.sort_values("SDSP_RAW", kind="stable", ignore_index=True)


def combine_years(
    raw_tables: list[pd.DataFrame],
    calendar: CalendarTable,
    *,
    source: str = SOURCE,
    fuel_order: tuple[str, ...] = FUEL_ORDER,
) -> pd.DataFrame:
    """Union parsed annual files into one sorted, gapless, renamed table.

    Files are taken in ascending filename order; duplicate keys keep the
    last occurrence so daily-update files override earlier publications.
    """
    if not raw_tables:
        raise ValidationError("no parsed tables to combine")
    ordered = sorted(raw_tables, key=lambda t: t.attrs.get("source_filename", ""))
    df = pd.concat(ordered, ignore_index=True, sort=False)
    df = df.drop_duplicates(subset="SDSP_RAW", keep="last")
    df = df.sort_values("SDSP_RAW", kind="stable", ignore_index=True)
    df = _order_raw_columns(df, fuel_order)

    _check_coverage(df["SDSP_RAW"], calendar)
    power_cols = [c for c in df.columns if c in fuel_order]
    df = _recreate_missing_rows(df, calendar, power_cols)

    df["ROWFLAG"] = pd.array([1] * len(df), dtype="Int64")
    df["utc"] = df["SDSP_RAW"].map(lambda k: calendar.lookup(k).utc)
    df["localtime"] = df["SDSP_RAW"].map(lambda k: calendar.lookup(k).localtime)

    renames = {c: power_column(source, c) for c in power_cols}
    for col in ("SETTLEMENT_DATE", "SETTLEMENT_PERIOD", "SDSP_RAW", "ROWFLAG", "utc", "localtime"):
        renames[col] = f"{source}_{col}"
    df = df.rename(columns=renames)

    lead = [
        f"{source}_SETTLEMENT_DATE",
        f"{source}_SETTLEMENT_PERIOD",
        f"{source}_SDSP_RAW",
        f"{source}_ROWFLAG",
        f"{source}_utc",
        f"{source}_localtime",
    ]
    df = df[lead + [power_column(source, c) for c in power_cols]]
    df.attrs["source_files"] = [t.attrs.get("source_filename", "") for t in ordered]
    df.attrs["source"] = source
    return df


def validate_ranges(table: pd.DataFrame) -> pd.DataFrame:
    """Non-fatal range report: per-column min/max/missing plus zero counts
    flagged as suspicious for categories that are never off nationally."""
    rows = []
    if len(table):
        periods = pd.to_numeric(table[f"{SOURCE}_SETTLEMENT_PERIOD"])
        rows.append(
            {
                "column": f"{SOURCE}_SETTLEMENT_PERIOD",
                "min": int(periods.min()),
                "max": int(periods.max()),
                "missing": 0,
                "zeros": 0,
                "suspicious_zeros": 0,
            }
        )
    suspicious_cols = {power_column(SOURCE, c) for c in ALWAYS_ON_CATEGORIES}
    for col in table.columns:
        if not col.startswith("POWER_"):
            continue
        series = table[col]
        zeros = int((series == 0).sum())
        rows.append(
            {
                "column": col,
                "min": None if series.isna().all() else int(series.min()),
                "max": None if series.isna().all() else int(series.max()),
                "missing": int(series.isna().sum()),
                "zeros": zeros,
                "suspicious_zeros": zeros if col in suspicious_cols else 0,
            }
        )
    return pd.DataFrame(rows, columns=["column", "min", "max", "missing", "zeros", "suspicious_zeros"])


def discover_fuelhh_files(directory: str | Path) -> list[Path]:
    """fuelhh*.csv files in ascending name order; row dates are authoritative,
    the filename year is not trusted."""
    return sorted(Path(p) for p in globmod.glob(str(Path(directory) / "fuelhh*.csv")))
