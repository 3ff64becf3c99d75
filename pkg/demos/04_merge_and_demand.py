"""Merging the feeds and computing the demand approximation.

Demand = transmission generation + embedded solar/wind estimates + net
interconnector imports. Elexon's zero-floored interconnector columns are
dropped in favour of the signed flows, so exports genuinely subtract.
Also shows the OTHER/BIOMASS split across the 2017 category boundary.
"""

import io

import pandas as pd

from espeni import (
    compute_espeni,
    compute_split_ratio,
    merge_tables,
    pinned_split_ratio,
    split_other_biomass,
    write_espeni_csv,
)

# --- the category split --------------------------------------------------
# Before 2017-11-01 biomass was buried inside OTHER. The POSTCALC columns
# carve it out with a biomass fraction: pinned 0.95, or computed from the
# reported means after the boundary.
pre = pd.DataFrame(
    {
        "ELEXM_utc": ["2015-06-01T00:00:00+00:00"],
        "POWER_ELEXM_OTHER_MW": pd.array([2000], dtype="Int64"),
        "POWER_ELEXM_BIOMASS_MW": pd.array([pd.NA], dtype="Int64"),
    }
)
split = split_other_biomass(pre, pinned_split_ratio())
print(
    "pre-boundary OTHER=2000 splits into OTHER_POSTCALC="
    f"{int(split['POWER_ELEXM_OTHER_POSTCALC_MW'].iloc[0])}, "
    f"BIOMASS_POSTCALC={int(split['POWER_ELEXM_BIOMASS_POSTCALC_MW'].iloc[0])}"
)

post = pd.DataFrame(
    {
        "ELEXM_utc": ["2018-01-01T00:00:00+00:00"] * 4,
        "POWER_ELEXM_OTHER_MW": pd.array([80, 120, 90, 110], dtype="Int64"),
        "POWER_ELEXM_BIOMASS_MW": pd.array([1800, 2000, 1850, 1950], dtype="Int64"),
    }
)
ratio = compute_split_ratio(post)
print(f"computed biomass fraction from reported values: {ratio.biomass_fraction:.4f}")

# --- merge and demand column --------------------------------------------
from espeni import combine_ng, combine_years, generate_calendar, normalize_periods
from espeni import parse_fuelhh_file, parse_historic_demand_file

cal = generate_calendar("2020-07-01", "2020-07-01")
fuelhh = (
    "#Settlement Date, Settlement Period, CCGT, OIL, COAL, NUCLEAR, WIND, PS,"
    " NPSHYD, OCGT, OTHER, INTFR, INTIRL, INTNED, INTEW, BIOMASS\n"
    "2020-07-01,1,10000,0,0,8000,5000,0,0,0,100,1000,0,0,0,2000\n"
    "2020-07-01,2,11000,0,0,8000,4000,0,0,0,100,1000,0,0,0,2000\n"
    "2020-07-01,3,12000,0,0,8000,3000,0,0,0,100,1000,0,0,0,2000\n"
)
ng_csv = (
    "SETTLEMENT_DATE,SETTLEMENT_PERIOD,EMBEDDED_WIND_GENERATION,"
    "EMBEDDED_SOLAR_GENERATION,IFA_FLOW,IFA2_FLOW,BRITNED_FLOW,MOYLE_FLOW,"
    "EAST_WEST_FLOW,NEMO_FLOW\n"
    "01-Jul-2020,1,900,2000,-1000,0,0,0,0,0\n"   # net export to France
    "01-Jul-2020,2,800,1500,500,0,-200,0,0,0\n"  # period 3 has no NG row
)
elexon = combine_years(
    [normalize_periods(parse_fuelhh_file(fuelhh, "fuelhh_2020.csv"))], cal
)
ng = combine_ng([parse_historic_demand_file(ng_csv, "demanddata_2020.csv")], cal)
merged = compute_espeni(merge_tables(split_other_biomass(elexon, pinned_split_ratio()), ng))

print("\nper-row demand (note the -1000 MW export in row 1):")
for _, row in merged.iterrows():
    ifa = row["POWER_NGEM_IFA_FLOW_MW"]
    ifa = "   -" if pd.isna(ifa) else f"{int(ifa):5d}"
    print(
        f"  {row['ELEXM_SDSP_RAW']}  IFA={ifa}  "
        f"ESPENI={int(row['POWER_ESPENI_MW'])} MW"
    )

buf = io.BytesIO()
write_espeni_csv(merged, "raw", buf)
print("\n25-column output header:")
print(" ", buf.getvalue().decode("utf-8").splitlines()[0][:100], "...")
