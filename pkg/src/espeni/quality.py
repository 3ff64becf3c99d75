"""Row-level error flags: detection, reconciliation and imputation.

A row flag of 1 means accepted, 0 means erroneous. Flagging is per row, not
per cell: one bad value poisons the whole row, so every power value in a
flagged row is erased and re-imputed in the clean output while the raw
output keeps the original values with only the flag toggled.

Machine proposals come from the zero-drop detector; human review can add or
override flags through the flag file, which is the durable handoff between
detection, the review UI and the pipeline.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

import pandas as pd

from .calendar import CalendarTable
from .errors import ConfigError, ImputeError, ValidationError

log = logging.getLogger(__name__)

SOURCES = ("ELEXM", "NGEM")
FLAG_CSV_HEADER = ("source", "datesp", "flag", "note", "updated_utc")
AUTO_ZERO_DROP_NOTE = "auto:zero-drop"


@dataclass(frozen=True)
class FlagEntry:
    source: str
    datesp: str
    flag: int
    note: str = ""
    updated_utc: str = ""

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValidationError(f"unknown flag source: {self.source!r}")
        if self.flag not in (0, 1):
            raise ValidationError(f"flag must be 0 or 1, got {self.flag!r}")


@dataclass(frozen=True)
class ErrorBlock:
    """A maximal run of consecutive flagged (flag=0) settlement keys."""

    source: str
    start_key: str
    length: int


class FlagSet:
    """At most one FlagEntry per (source, settlement key)."""

    def __init__(self, entries: Iterable[FlagEntry] = ()):
        self._entries: dict[tuple[str, str], FlagEntry] = {}
        for e in entries:
            self.set(e)

    def set(self, entry: FlagEntry) -> None:
        self._entries[(entry.source, entry.datesp)] = entry

    def get(self, source: str, datesp: str) -> FlagEntry | None:
        return self._entries.get((source, datesp))

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[FlagEntry]:
        return iter(sorted(self._entries.values(), key=lambda e: (e.source, e.datesp)))

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._entries

    def for_source(self, source: str) -> list[FlagEntry]:
        return [e for e in self if e.source == source]

    def zero_keys(self, source: str) -> list[str]:
        return [e.datesp for e in self.for_source(source) if e.flag == 0]


def merge_flags(auto: FlagSet, manual: FlagSet) -> FlagSet:
    """Union of the two sets; manual entries win on the same (source, key)."""
    merged = FlagSet(auto)
    for entry in manual:
        merged.set(entry)
    return merged


def write_flag_csv(flags: FlagSet, destination: str | Path | io.IOBase) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FLAG_CSV_HEADER)
    for e in flags:
        writer.writerow((e.source, e.datesp, e.flag, e.note, e.updated_utc))
    data = buf.getvalue().encode("utf-8")
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        Path(destination).write_bytes(data)
    return len(data)


def read_flag_csv(source: str | Path | io.IOBase) -> FlagSet:
    if hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != FLAG_CSV_HEADER:
        raise ValidationError(f"not a flag file (header {header!r})")
    flags = FlagSet()
    for row in reader:
        if not row:
            continue
        src, datesp, flag, note, updated = row
        flags.set(FlagEntry(src, datesp, int(flag), note, updated))
    return flags


def detect_zero_drops(
    table: pd.DataFrame, categories: Iterable[str] = ("CCGT", "NUCLEAR")
) -> FlagSet:
    """Propose flag=0 for every row where all listed categories are zero
    at once; a reported zero is an error, a missing cell is not."""
    categories = tuple(categories)
    if not categories:
        raise ConfigError("detector needs at least one category")
    source = table.attrs.get("source", "ELEXM")
    mask = pd.Series(True, index=table.index)
    for cat in categories:
        col = f"POWER_{source}_{cat}_MW"
        if col not in table.columns:
            raise ConfigError(f"unknown detector category {cat!r} (no column {col})")
        mask &= (table[col] == 0).fillna(False)
    keys = table.loc[mask, f"{source}_SDSP_RAW"]
    return FlagSet(
        FlagEntry(source, key, 0, AUTO_ZERO_DROP_NOTE) for key in keys
    )


def apply_flags(table: pd.DataFrame, flags: FlagSet, *, erase: bool = True) -> pd.DataFrame:
    """Stamp row flags onto a per-source table.

    With erase=True every power cell of a flag=0 row becomes missing, ready
    for imputation; the caller keeps the original table for the raw output.
    Flags for keys the table does not contain are skipped with a warning and
    recorded in the result's ``skipped_flags`` attr.
    """
    source = table.attrs.get("source", "ELEXM")
    key_col = f"{source}_SDSP_RAW"
    flag_col = f"{source}_ROWFLAG"
    power_cols = [c for c in table.columns if c.startswith(f"POWER_{source}_")]

    out = table.copy()
    out.attrs.update(table.attrs)
    positions = {k: i for i, k in enumerate(out[key_col])}
    skipped = []
    for entry in flags.for_source(source):
        pos = positions.get(entry.datesp)
        if pos is None:
            skipped.append(entry.datesp)
            continue
        out.iloc[pos, out.columns.get_loc(flag_col)] = entry.flag
        if erase and entry.flag == 0:
            for col in power_cols:
                out.iloc[pos, out.columns.get_loc(col)] = pd.NA
    if skipped:
        log.warning("%d flag(s) reference keys missing from %s table: %s",
                    len(skipped), source, ", ".join(skipped[:5]))
    out.attrs["skipped_flags"] = skipped
    return out


def interpolate_block(before: int | None, after: int | None, length: int) -> list[int | None]:
    """Values for a run of `length` erased cells between two anchors.

    With both anchors the i-th cell gets round(a + (b-a) * i / (length+1))
    with ties to even, computed exactly over rationals. With one anchor the
    run copies it; with none it stays missing.
    """
    if length < 1:
        raise ValidationError(f"block length must be >= 1, got {length}")
    if before is None and after is None:
        return [None] * length
    if before is None:
        return [after] * length
    if after is None:
        return [before] * length
    a, step = Fraction(before), Fraction(after - before, length + 1)
    return [int(round(a + step * i)) for i in range(1, length + 1)]


def _flagged_blocks(flags01: list[int]) -> list[tuple[int, int]]:
    """(start, length) of maximal runs of zeros in a 0/1 sequence."""
    blocks = []
    i, n = 0, len(flags01)
    while i < n:
        if flags01[i] == 0:
            j = i
            while j < n and flags01[j] == 0:
                j += 1
            blocks.append((i, j - i))
            i = j
        else:
            i += 1
    return blocks


def impute(table: pd.DataFrame) -> pd.DataFrame:
    """Fill every power cell of flag=0 rows by linear interpolation between
    the nearest flag=1 rows in that column.

    Interpolation runs over row position, not wall-clock time; the two agree
    on a gapless half-hourly table and short/long days fall out naturally.
    Blocks touching the start or end of the series copy the one available
    anchor. Cells whose anchors are themselves missing (a column outside its
    reporting era) stay missing. Idempotent: flagged rows are recomputed
    from the same anchors on every run and flags are never reset.
    """
    source = table.attrs.get("source", "ELEXM")
    flag_col = f"{source}_ROWFLAG"
    power_cols = [c for c in table.columns if c.startswith(f"POWER_{source}_")]

    flags01 = [0 if (not pd.isna(v) and v == 0) else 1 for v in table[flag_col]]
    if 1 not in flags01 and flags01:
        raise ImputeError(f"every {source} row is flagged; no anchors to interpolate from")
    blocks = _flagged_blocks(flags01)
    if not blocks:
        return table.copy()

    out = table.copy()
    out.attrs.update(table.attrs)
    n = len(out)
    for col in power_cols:
        values = list(out[col])
        for start, length in blocks:
            before = values[start - 1] if start > 0 else None
            after = values[start + length] if start + length < n else None
            before = None if before is None or pd.isna(before) else int(before)
            after = None if after is None or pd.isna(after) else int(after)
            filled = interpolate_block(before, after, length)
            for offset, v in enumerate(filled):
                values[start + offset] = pd.NA if v is None else v
        out[col] = pd.array(
            [pd.NA if pd.isna(v) else int(v) for v in values], dtype="Int64"
        )
    return out


def enumerate_blocks(flags: FlagSet, calendar: CalendarTable) -> list[ErrorBlock]:
    """Maximal runs of consecutive flag=0 keys per source, in key order."""
    blocks: list[ErrorBlock] = []
    for source in SOURCES:
        keys = flags.zero_keys(source)
        if not keys:
            continue
        positioned = sorted((calendar.position(k), k) for k in keys)
        run_start, run_len, prev_pos = positioned[0][1], 1, positioned[0][0]
        for pos, key in positioned[1:]:
            if pos == prev_pos + 1:
                run_len += 1
            else:
                blocks.append(ErrorBlock(source, run_start, run_len))
                run_start, run_len = key, 1
            prev_pos = pos
        blocks.append(ErrorBlock(source, run_start, run_len))
    return blocks
