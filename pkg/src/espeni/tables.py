"""Shared helpers for the half-hourly power tables.

All power columns use pandas' nullable Int64 so that a column a source file
never carried stays missing instead of silently becoming zero. Timestamps
travel as ISO 8601 text; because every UTC value carries the same "+00:00"
suffix, lexicographic order on the text equals chronological order, which
keeps sorting and range filters free of datetime parsing.
"""

from __future__ import annotations

import hashlib
import io
import os
from pathlib import Path

import pandas as pd

from .errors import ParseError

UTF8 = "utf-8"


def coerce_int_column(values: pd.Series, column: str, filename: str) -> pd.Series:
    """Parse a string column to nullable Int64.

    Empty cells become missing. Whitespace around digits is tolerated;
    anything else is fatal with the offending 1-based data row number.
    """
    stripped = values.fillna("").astype(str).str.strip()
    blank = stripped == ""
    numeric = pd.to_numeric(stripped.where(~blank), errors="coerce")
    bad = numeric.isna() & ~blank
    if bad.any():
        row = int(bad.idxmax()) + 1
        raise ParseError(
            f"{filename}: non-integer value {stripped[bad.idxmax()]!r} "
            f"in column {column}, data row {row}"
        )
    fractional = numeric.notna() & (numeric != numeric.round())
    if fractional.any():
        row = int(fractional.idxmax()) + 1
        raise ParseError(
            f"{filename}: non-integer value {stripped[fractional.idxmax()]!r} "
            f"in column {column}, data row {row}"
        )
    return numeric.astype("Int64")


def frame_to_csv_bytes(frame: pd.DataFrame) -> bytes:
    """Serialise a table deterministically: UTF-8, LF line endings,
    missing cells empty, no index column."""
    buf = io.StringIO()
    frame.to_csv(buf, index=False, lineterminator="\n", na_rep="")
    return buf.getvalue().encode(UTF8)


def write_frame_csv(frame: pd.DataFrame, destination: str | Path) -> int:
    """Atomically write a table as CSV; returns bytes written."""
    data = frame_to_csv_bytes(frame)
    path = Path(destination)
    tmp = path.with_name(f"{path.name}.tmp-{os.getpid()}")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return len(data)


def read_table_csv(source, int_columns: tuple[str, ...] | None = None) -> pd.DataFrame:
    """Read a CSV written by write_frame_csv back into a table.

    Columns named in int_columns (default: every POWER_* or *ROWFLAG column)
    come back as Int64; everything else stays text.
    """
    df = pd.read_csv(source, dtype=str, encoding=UTF8, keep_default_na=False)
    if int_columns is None:
        int_columns = tuple(
            c for c in df.columns if c.startswith("POWER_") or c.endswith("ROWFLAG")
        )
    for col in int_columns:
        if col in df.columns:
            df[col] = coerce_int_column(df[col], col, str(source))
    return df


def file_digest(path: str | Path, algorithm: str = "sha256") -> str:
    h = hashlib.new(algorithm)
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_checksum_file(target: str | Path, algorithm: str = "sha256") -> Path:
    """Write `<digest>  <filename>` next to the target, shasum-style."""
    target = Path(target)
    digest = file_digest(target, algorithm)
    sidecar = target.with_name(f"{target.name}.{algorithm}")
    sidecar.write_text(f"{digest}  {target.name}\n", encoding=UTF8)
    return sidecar
