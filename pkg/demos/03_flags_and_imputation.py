"""Error flagging and whole-row imputation.

A typical feed error zeroes every category for a few periods at once. The
detector proposes flag=0 for rows where the always-on categories are all
zero; a human can override through the flag file; flagged rows are erased
and refilled by linear interpolation in the clean output.
"""

import pandas as pd

from espeni import (
    FlagEntry,
    FlagSet,
    apply_flags,
    detect_zero_drops,
    enumerate_blocks,
    generate_calendar,
    impute,
    merge_flags,
)

cal = generate_calendar("2020-04-30", "2020-04-30")
keys = [e.key.canonical_text for e in cal]
n = len(keys)

ccgt = [12000 + 5 * i for i in range(n)]
nuclear = [6100] * n
wind = [3000 + 20 * i for i in range(n)]
for i in (18, 19, 20):  # the feed drops to zero for three periods
    ccgt[i] = nuclear[i] = wind[i] = 0

table = pd.DataFrame(
    {
        "ELEXM_SDSP_RAW": keys,
        "ELEXM_ROWFLAG": pd.array([1] * n, dtype="Int64"),
        "POWER_ELEXM_CCGT_MW": pd.array(ccgt, dtype="Int64"),
        "POWER_ELEXM_NUCLEAR_MW": pd.array(nuclear, dtype="Int64"),
        "POWER_ELEXM_WIND_MW": pd.array(wind, dtype="Int64"),
    }
)
table.attrs["source"] = "ELEXM"

auto = detect_zero_drops(table)  # defaults to CCGT + NUCLEAR
print(f"detector proposed {len(auto)} flags:")
for entry in auto:
    print(f"  {entry.datesp} flag={entry.flag} note={entry.note}")

# A reviewer decides period 21 is fine after all and clears it by hand;
# manual entries always win over machine proposals.
manual = FlagSet([FlagEntry("ELEXM", keys[20], 1, "checked: genuine outage")])
flags = merge_flags(auto, manual)
print(f"\nafter review: {len(flags.zero_keys('ELEXM'))} rows stay flagged")

for block in enumerate_blocks(flags, cal):
    print(f"error block: starts {block.start_key}, length {block.length}")

erased = apply_flags(table, flags)
clean = impute(erased)
print("\nrow        flag  CCGT raw -> clean")
for i in range(16, 24):
    print(
        f"{keys[i]}  {int(clean['ELEXM_ROWFLAG'].iloc[i])}    "
        f"{ccgt[i]:5d} -> {int(clean['POWER_ELEXM_CCGT_MW'].iloc[i]):5d}"
    )
print("\nflags stay 0 after imputation; the raw variant keeps the zeros")
