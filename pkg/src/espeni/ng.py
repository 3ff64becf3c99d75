"""Ingest of National Grid historic-demand files.

These CSVs (downloadable without a login) carry the system operator's
estimates for embedded solar and wind generation plus signed interconnector
flows, which the transmission-level Elexon feed lacks. Only eight power
columns are retained; forecast rows are dropped. Settlement dates appear as
day-month-year text whose month abbreviation changed letter case over the
years ("01-Apr-2005" vs "01-APR-2015"), or already in ISO form.
"""

from __future__ import annotations

import datetime as dt
import glob as globmod
import io
import re
from pathlib import Path

import pandas as pd

from .calendar import CalendarTable
from .elexon import _check_coverage, power_column
from .errors import SchemaError, ParseError, ValidationError
from .tables import coerce_int_column

SOURCE = "NGEM"

# The retained power columns, canonical names.
POWER_ORDER = (
    "EMBEDDED_WIND_GENERATION",
    "EMBEDDED_SOLAR_GENERATION",
    "IFA_FLOW",
    "IFA2_FLOW",
    "BRITNED_FLOW",
    "MOYLE_FLOW",
    "EAST_WEST_FLOW",
    "NEMO_FLOW",
)

EMBEDDED_COLUMNS = ("EMBEDDED_WIND_GENERATION", "EMBEDDED_SOLAR_GENERATION")

# Historical column names mapped to their canonical replacements.
DEFAULT_ALIASES = {
    "FRENCH_FLOW": "IFA_FLOW",
    "INTNED_FLOW": "BRITNED_FLOW",
}

_ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def _normalize_date(text: str, filename: str, row: int) -> str:
    value = text.strip()
    if _ISO_DATE.match(value):
        return value
    try:
        return dt.datetime.strptime(value, "%d-%b-%Y").date().isoformat()
    except ValueError:
        raise ParseError(
            f"{filename}: unparseable settlement date {text!r}, data row {row}"
        ) from None


def parse_historic_demand_file(
    content: bytes | str | io.IOBase,
    filename: str,
    aliases: dict[str, str] | None = None,
) -> pd.DataFrame:
    """Parse one historic-demand CSV into a raw table keyed on SDSP_RAW.

    Forecast rows (FORECAST_ACTUAL_INDICATOR == 'F') are removed along with
    the indicator column; within-file duplicate keys keep the first
    occurrence; everything except the eight retained power columns is
    dropped.
    """
    if aliases is None:
        aliases = DEFAULT_ALIASES
    if isinstance(content, bytes):
        buf: io.IOBase = io.BytesIO(content)
    elif isinstance(content, str):
        buf = io.StringIO(content)
    else:
        buf = content
    df = pd.read_csv(buf, dtype=str, encoding="utf-8", keep_default_na=False)
    df = df.rename(columns=lambda c: c.upper().strip())
    df = df.rename(columns=aliases)

    for required in ("SETTLEMENT_DATE", "SETTLEMENT_PERIOD"):
        if required not in df.columns:
            raise SchemaError(f"{filename}: missing column {required}")

    if "FORECAST_ACTUAL_INDICATOR" in df.columns:
        df = df[df["FORECAST_ACTUAL_INDICATOR"].str.strip() != "F"]
        df = df.drop(columns="FORECAST_ACTUAL_INDICATOR")
        df = df.reset_index(drop=True)

    df["SETTLEMENT_DATE"] = [
        _normalize_date(v, filename, i + 1)
        for i, v in enumerate(df["SETTLEMENT_DATE"])
    ]
    periods = pd.to_numeric(df["SETTLEMENT_PERIOD"].str.strip(), errors="coerce")
    if periods.isna().any():
        bad = df["SETTLEMENT_PERIOD"][periods.isna()]
        raise ParseError(
            f"{filename}: unparseable settlement period {bad.iloc[0]!r} "
            f"(data row {int(bad.index[0]) + 1})"
        )
    df["SETTLEMENT_PERIOD"] = periods.astype(int).astype(str).str.zfill(2)
    df["SDSP_RAW"] = df["SETTLEMENT_DATE"] + "_" + df["SETTLEMENT_PERIOD"]

    df = df.sort_values("SDSP_RAW", kind="stable")
    df = df.drop_duplicates(subset="SDSP_RAW", keep="first").reset_index(drop=True)

    keep = ["SETTLEMENT_DATE", "SETTLEMENT_PERIOD", "SDSP_RAW"] + [
        c for c in POWER_ORDER if c in df.columns
    ]
    df = df[keep]
    for col in POWER_ORDER:
        if col in df.columns:
            df[col] = coerce_int_column(df[col], col, filename)
    df.attrs["source_filename"] = filename
    return df


def combine_ng(raw_tables: list[pd.DataFrame], calendar: CalendarTable) -> pd.DataFrame:
    """Union parsed files into one sorted, renamed table.

    Files are taken in ascending filename order and cross-file duplicate
    keys keep the last occurrence: daily-update files republish recent
    periods with corrections and must win. Coverage gaps are allowed here,
    the embedded estimates start later than the Elexon history.
    """
    if not raw_tables:
        raise ValidationError("no parsed tables to combine")
    ordered = sorted(raw_tables, key=lambda t: t.attrs.get("source_filename", ""))
    df = pd.concat(ordered, ignore_index=True, sort=False)
    df = df.drop_duplicates(subset="SDSP_RAW", keep="last")
    df = df.sort_values("SDSP_RAW", kind="stable", ignore_index=True)

    _check_coverage(df["SDSP_RAW"], calendar)
    df["ROWFLAG"] = pd.array([1] * len(df), dtype="Int64")
    df["utc"] = df["SDSP_RAW"].map(lambda k: calendar.lookup(k).utc)
    df["localtime"] = df["SDSP_RAW"].map(lambda k: calendar.lookup(k).localtime)

    power_cols = [c for c in POWER_ORDER if c in df.columns]
    renames = {c: power_column(SOURCE, c) for c in power_cols}
    for col in ("SETTLEMENT_DATE", "SETTLEMENT_PERIOD", "SDSP_RAW", "ROWFLAG", "utc", "localtime"):
        renames[col] = f"{SOURCE}_{col}"
    df = df.rename(columns=renames)

    lead = [
        f"{SOURCE}_SETTLEMENT_DATE",
        f"{SOURCE}_SETTLEMENT_PERIOD",
        f"{SOURCE}_SDSP_RAW",
        f"{SOURCE}_ROWFLAG",
        f"{SOURCE}_utc",
        f"{SOURCE}_localtime",
    ]
    df = df[lead + [power_column(SOURCE, c) for c in power_cols]]
    df.attrs["source_files"] = [t.attrs.get("source_filename", "") for t in ordered]
    df.attrs["source"] = SOURCE
    return df


def discover_ng_files(directory: str | Path) -> list[Path]:
    """All CSVs in the National Grid download directory, ascending name order."""
    return sorted(Path(p) for p in globmod.glob(str(Path(directory) / "*.csv")))
