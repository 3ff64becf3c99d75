"""Parsing the two raw feeds: generation by fuel type and embedded estimates.

Shows the header normalisation, missing-row repair and duplicate handling
on small synthetic files shaped exactly like the real downloads.
"""

from espeni import (
    combine_ng,
    combine_years,
    generate_calendar,
    normalize_periods,
    parse_fuelhh_file,
    parse_historic_demand_file,
    validate_ranges,
)

cal = generate_calendar("2020-07-01", "2020-07-01")

# --- the transmission-level generation file -----------------------------
# Header starts with a '#' and single-digit periods are not padded; both
# are normalised away. Period 20 is missing from this file on purpose.
header = "#Settlement Date, Settlement Period, CCGT, NUCLEAR, WIND, OTHER, BIOMASS"
lines = [header]
for p in range(1, 49):
    if p == 20:
        continue
    lines.append(f"2020-07-01,{p},{10000 + 10 * p},6000,{3000 + p},95,2850")
fuelhh = "\n".join(lines) + "\n"

raw = normalize_periods(parse_fuelhh_file(fuelhh, "fuelhh_2020.csv"))
print(f"parsed {len(raw)} rows; canonical key example: {raw['SDSP_RAW'].iloc[8]}")

table = combine_years([raw], cal)
print(f"combined: {len(table)} rows (the missing period was re-created)")
repaired = table[table["ELEXM_SDSP_RAW"] == "2020-07-01_20"].iloc[0]
print(
    "repaired row CCGT =", int(repaired["POWER_ELEXM_CCGT_MW"]),
    "(midpoint of its neighbours", 10000 + 10 * 19, "and", 10000 + 10 * 21, ")",
)

print("\nrange report:")
print(validate_ranges(table).to_string(index=False))

# --- the embedded-generation / interconnector file ----------------------
# Dates come as day-month-year with unpredictable month casing, forecast
# rows are mixed in, and flows are signed.
ng_header = (
    "SETTLEMENT_DATE,SETTLEMENT_PERIOD,FORECAST_ACTUAL_INDICATOR,ND,"
    "EMBEDDED_WIND_GENERATION,EMBEDDED_SOLAR_GENERATION,IFA_FLOW,IFA2_FLOW,"
    "BRITNED_FLOW,MOYLE_FLOW,EAST_WEST_FLOW,NEMO_FLOW"
)
rows = [ng_header]
for p in range(1, 49):
    rows.append(f"01-JUL-2020,{p},A,30000,1500,800,-250,0,100,-30,0,300")
rows.append("02-JUL-2020,1,F,30000,0,0,0,0,0,0,0,0")  # forecast row, dropped
ng_raw = parse_historic_demand_file("\n".join(rows) + "\n", "demanddata_2020.csv")
print(f"\nembedded file: {len(ng_raw)} actual rows (forecast rows dropped)")

ng_table = combine_ng([ng_raw], cal)
print(
    "signed flows survive:",
    f"IFA={int(ng_table['POWER_NGEM_IFA_FLOW_MW'].iloc[0])}",
    f"MOYLE={int(ng_table['POWER_NGEM_MOYLE_FLOW_MW'].iloc[0])}",
)
