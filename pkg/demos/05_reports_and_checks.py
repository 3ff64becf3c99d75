"""Validation reporting: energy totals, reference comparison, error stats.

Each half-hourly value is an average MW, so energy per bucket is
sum(MW) * 0.5 MWh. The comparison target is whatever monthly supply
series the user extracts to a two-column CSV.
"""

import pandas as pd

from espeni import (
    BeisMonthly,
    aggregate_energy,
    compare_beis,
    error_summary,
    generate_calendar,
)
from espeni.quality import FlagEntry, FlagSet
from espeni.reporting import format_comparison, format_error_summary


def constant_table(start: str, end: str, mw: int) -> pd.DataFrame:
    entries = generate_calendar(start, end).entries
    return pd.DataFrame(
        {
            "ELEXM_utc": [e.utc for e in entries],
            "ELEXM_localtime": [e.localtime for e in entries],
            "POWER_ESPENI_MW": pd.array([mw] * len(entries), dtype="Int64"),
        }
    )


# Constant 1000 MW across March: 31 days * 48 periods, except the short
# day contributes two periods fewer.
table = constant_table("2020-03-01", "2020-03-31", 1000)
(march,) = aggregate_energy(table, "POWER_ESPENI_MW", "month", "local")
print(f"march energy at constant 1000 MW: {march.energy_twh * 1e6:.0f} MWh")
print(f"  (30 days * 24 h + one 23-hour day = {30 * 24 + 23} hours)")

quarters = aggregate_energy(
    constant_table("2020-01-01", "2020-06-30", 1000), "POWER_ESPENI_MW", "quarter", "local"
)
for agg in quarters:
    print(f"  {agg.bucket}: {agg.energy_twh:.6f} TWh")

# Compare against a monthly reference series (values in GWh).
reference = [BeisMonthly("2020-01", 745.0), BeisMonthly("2020-02", 700.0), BeisMonthly("2020-03", 746.0)]
result = compare_beis(quarters, reference, "quarter")
print()
print(format_comparison(result))

# Error statistics from a flag set.
cal = generate_calendar("2020-01-01", "2020-01-02")
keys = [e.key.canonical_text for e in cal]
flags = FlagSet(
    [FlagEntry("ELEXM", k, 0) for k in keys[10:13]]
    + [FlagEntry("ELEXM", keys[40], 0)]
)
print(format_error_summary(error_summary(flags, cal, total_rows=len(keys))))
