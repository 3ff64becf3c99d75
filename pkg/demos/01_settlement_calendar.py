"""Settlement-period calendar: keys, timestamps and clock-change days.

GB electricity data is keyed by (settlement date, settlement period)
instead of timestamps. This demo builds the master mapping to ISO 8601
UTC / Europe/London text and pokes at the two odd days of the year.
"""

import datetime as dt
import io

from espeni import generate_calendar, write_calendar_csv

cal = generate_calendar("2020-01-01", "2020-12-31")
print(f"2020 has {len(cal)} half-hourly settlement periods (leap year)")

# A standard winter day: localtime equals UTC.
entry = cal.lookup("2020-01-19_09")
print(f"\n{entry.key.canonical_text}: utc={entry.utc} local={entry.localtime}")

# High summer: the same period number is an hour earlier in UTC.
entry = cal.lookup("2020-06-19_09")
print(f"{entry.key.canonical_text}: utc={entry.utc} local={entry.localtime}")

# The short day: clocks jump from 01:00 to 02:00 local, so period 3
# lands on 02:00 wall-clock time and the day only has 46 periods.
short = dt.date(2020, 3, 29)
print(f"\n{short} has {cal.day_length(short)} periods")
for p in (1, 2, 3, 4):
    e = cal.lookup(f"2020-03-29_{p:02d}")
    print(f"  period {p:2d}: utc={e.utc}  local={e.localtime}")

# The long day gains the hour back: 50 periods, and the 01:00 local
# wall-clock time happens twice with different offsets.
long_day = dt.date(2020, 10, 25)
print(f"\n{long_day} has {cal.day_length(long_day)} periods")
for p in (3, 4, 5, 6):
    e = cal.lookup(f"2020-10-25_{p:02d}")
    print(f"  period {p:2d}: utc={e.utc}  local={e.localtime}")

# The whole table serialises to a CSV keyed on the canonical datesp text.
buf = io.BytesIO()
n = write_calendar_csv(cal, buf)
print(f"\ncalendar CSV is {n} bytes; first rows:")
for line in buf.getvalue().decode("utf-8").splitlines()[:3]:
    print(f"  {line}")
