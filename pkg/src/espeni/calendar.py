"""Settlement-period calendar for Great Britain's electricity market.

GB balancing data is keyed by (settlement date, settlement period): a local
civil date plus a half-hour ordinal within it. A standard day has 48 periods;
the March clock-change day has 46 (an hour is lost when clocks go forward)
and the October clock-change day has 50. This module generates the master
mapping from those keys to ISO 8601 UTC and Europe/London localtime text.

The clock-change rules are encoded directly (forward on the last Sunday of
March at 01:00 UTC, back on the last Sunday of October at 01:00 UTC) rather
than delegated to a timezone database, so the generated calendar is
reproducible on any host; dates before 1996 are rejected because older UK
rules differed. The test suite cross-checks the output against zoneinfo.

Period 1 begins at local midnight and periods advance in UTC order, which is
the only numbering consistent with the 46/48/50 day lengths.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator

from .errors import CalendarRangeError, MissingKeyError, ValidationError

MIN_RULE_YEAR = 1996
HALF_HOUR = dt.timedelta(minutes=30)
_ONE_HOUR = dt.timedelta(hours=1)

CALENDAR_CSV_HEADER = (
    "datesp,settlementdate,settlementperiod,utc,localtime,"
    "localtimeisdst,short_day_flag,long_day_flag,normal_day_flag"
)


@dataclass(frozen=True, slots=True)
class SettlementKey:
    """A (settlement date, settlement period) pair with its canonical text form."""

    settlement_date: dt.date
    settlement_period: int
    canonical_text: str


@dataclass(frozen=True, slots=True)
class CalendarEntry:
    """One half-hour period: key plus UTC/localtime text and day-type flags."""

    key: SettlementKey
    utc: str
    localtime: str
    localtime_is_dst: bool
    short_day: bool
    long_day: bool
    normal_day: bool


def make_key(settlement_date: dt.date, settlement_period: int) -> SettlementKey:
    text = f"{settlement_date.isoformat()}_{settlement_period:02d}"
    return SettlementKey(settlement_date, settlement_period, text)


def last_sunday(year: int, month: int) -> dt.date:
    d = dt.date(year, month, 31)
    return d - dt.timedelta(days=(d.weekday() + 1) % 7)


def clock_change_dates(year: int) -> tuple[dt.date, dt.date]:
    """The short (March) and long (October) day of a year."""
    return last_sunday(year, 3), last_sunday(year, 10)


def _bst_window_utc(year: int) -> tuple[dt.datetime, dt.datetime]:
    spring, autumn = clock_change_dates(year)
    start = dt.datetime(spring.year, spring.month, spring.day, 1, 0, 0)
    end = dt.datetime(autumn.year, autumn.month, autumn.day, 1, 0, 0)
    return start, end


def is_bst(utc_naive: dt.datetime) -> bool:
    """Whether a naive-UTC instant falls inside British Summer Time."""
    start, end = _bst_window_utc(utc_naive.year)
    return start <= utc_naive < end


class CalendarTable:
    """Immutable, ordered sequence of calendar entries with key lookup.

    Entries are strictly increasing in UTC with a 30-minute stride and
    carry no duplicates, so the table doubles as the authoritative key
    sequence for gap detection during ingest.
    """

    def __init__(self, entries: list[CalendarEntry]):
        self._entries = entries
        self._index: dict[str, int] = {
            e.key.canonical_text: i for i, e in enumerate(entries)
        }
        self._day_lengths: dict[dt.date, int] = {}
        for e in entries:
            d = e.key.settlement_date
            n = self._day_lengths.get(d, 0) + 1
            self._day_lengths[d] = n

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[CalendarEntry]:
        return iter(self._entries)

    @property
    def entries(self) -> list[CalendarEntry]:
        return self._entries

    def lookup(self, key_text: str) -> CalendarEntry:
        """Return the entry for a canonical key; total over the generated range."""
        i = self._index.get(key_text)
        if i is None:
            raise MissingKeyError(f"settlement key not in calendar: {key_text!r}")
        return self._entries[i]

    def __contains__(self, key_text: str) -> bool:
        return key_text in self._index

    def position(self, key_text: str) -> int:
        i = self._index.get(key_text)
        if i is None:
            raise MissingKeyError(f"settlement key not in calendar: {key_text!r}")
        return i

    def day_length(self, date: dt.date) -> int:
        """Number of settlement periods (46, 48 or 50) on a covered date."""
        n = self._day_lengths.get(date)
        if n is None:
            raise CalendarRangeError(f"date not in generated calendar: {date}")
        return n

    def keys_between(self, first_key: str, last_key: str) -> list[str]:
        """All canonical keys from first_key to last_key inclusive, in UTC order."""
        i, j = self.position(first_key), self.position(last_key)
        if i > j:
            raise ValidationError(f"key range reversed: {first_key} > {last_key}")
        return [e.key.canonical_text for e in self._entries[i : j + 1]]


def _coerce_date(value: dt.date | str) -> dt.date:
    if isinstance(value, dt.date):
        return value
    return dt.date.fromisoformat(value)


def generate_calendar(
    start_date: dt.date | str, end_date: dt.date | str
) -> CalendarTable:
    """Generate entries for every half-hour whose localtime falls on a date
    in [start_date, end_date].

    Walks UTC in 30-minute steps from the UTC instant of start_date's local
    midnight; the settlement date is the localtime civil date and the period
    is the running ordinal within that date.
    """
    start = _coerce_date(start_date)
    end = _coerce_date(end_date)
    if start > end:
        raise CalendarRangeError(f"start date {start} is after end date {end}")
    if start.year < MIN_RULE_YEAR:
        raise CalendarRangeError(
            f"dates before {MIN_RULE_YEAR} are outside the encoded clock-change rules"
        )

    spring, autumn = clock_change_dates(start.year)
    midnight_is_bst = spring < start <= autumn
    utc = dt.datetime(start.year, start.month, start.day)
    if midnight_is_bst:
        utc -= _ONE_HOUR

    entries: list[CalendarEntry] = []
    windows: dict[int, tuple[dt.datetime, dt.datetime]] = {}
    change_days: dict[int, tuple[dt.date, dt.date]] = {}
    current_date: dt.date | None = None
    period = 0

    while True:
        year = utc.year
        window = windows.get(year)
        if window is None:
            window = _bst_window_utc(year)
            windows[year] = window
        bst = window[0] <= utc < window[1]
        local = utc + _ONE_HOUR if bst else utc
        local_date = local.date()
        if local_date > end:
            break
        if local_date != current_date:
            current_date = local_date
            period = 1
        else:
            period += 1

        days = change_days.get(local_date.year)
        if days is None:
            days = clock_change_dates(local_date.year)
            change_days[local_date.year] = days
        short = local_date == days[0]
        long = local_date == days[1]

        key = SettlementKey(
            local_date, period, f"{local_date.isoformat()}_{period:02d}"
        )
        entries.append(
            CalendarEntry(
                key=key,
                utc=utc.isoformat() + "+00:00",
                localtime=local.isoformat() + ("+01:00" if bst else "+00:00"),
                localtime_is_dst=bst,
                short_day=short,
                long_day=long,
                normal_day=not (short or long),
            )
        )
        utc += HALF_HOUR

    return CalendarTable(entries)


def default_range(today: dt.date | None = None) -> tuple[dt.date, dt.date]:
    """Default generation span: 2008-01-01 through the end of next year,
    so daily-updated source files always resolve."""
    today = today or dt.date.today()
    return dt.date(2008, 1, 1), dt.date(today.year + 1, 12, 31)


def _bool_text(value: bool) -> str:
    return "TRUE" if value else "FALSE"


def write_calendar_csv(table: CalendarTable, destination: str | Path | IO[bytes]) -> int:
    """Write the calendar as UTF-8 CSV; returns the number of bytes written."""
    if len(table) == 0:
        raise ValidationError("refusing to write an empty calendar")
    lines = [CALENDAR_CSV_HEADER]
    for e in table:
        lines.append(
            ",".join(
                (
                    e.key.canonical_text,
                    e.key.settlement_date.isoformat(),
                    f"{e.key.settlement_period:02d}",
                    e.utc,
                    e.localtime,
                    _bool_text(e.localtime_is_dst),
                    _bool_text(e.short_day),
                    _bool_text(e.long_day),
                    _bool_text(e.normal_day),
                )
            )
        )
    data = ("\n".join(lines) + "\n").encode("utf-8")
    if hasattr(destination, "write"):
        destination.write(data)  # type: ignore[union-attr]
    else:
        Path(destination).write_bytes(data)
    return len(data)


def read_calendar_csv(source: str | Path) -> CalendarTable:
    """Load a calendar previously written by write_calendar_csv."""
    text = Path(source).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != CALENDAR_CSV_HEADER:
        raise ValidationError(f"not a calendar file: {source}")
    entries = []
    for line in lines[1:]:
        datesp, sdate, speriod, utc, localtime, isdst, short, long_, normal = (
            line.split(",")
        )
        key = SettlementKey(dt.date.fromisoformat(sdate), int(speriod), datesp)
        entries.append(
            CalendarEntry(
                key=key,
                utc=utc,
                localtime=localtime,
                localtime_is_dst=isdst == "TRUE",
                short_day=short == "TRUE",
                long_day=long_ == "TRUE",
                normal_day=normal == "TRUE",
            )
        )
    return CalendarTable(entries)
