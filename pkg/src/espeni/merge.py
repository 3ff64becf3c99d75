"""Merge the two source tables and compute the half-hourly demand column.

The Elexon table is the spine: National Grid rows join onto it by settlement
key, Elexon's zero-floored interconnector columns are dropped in favour of
the signed National Grid flows, and the demand approximation is the sum of
all transmission generation, the embedded solar/wind estimates and the net
interconnector imports. Pumped-storage demand is not subtracted; it only
enters as non-negative generation.

Elexon's OTHER category contained biomass until 2017-11-01, when BIOMASS
became its own category. The *_POSTCALC columns carry a consistent series
across that boundary: before it the OTHER+BIOMASS sum is split by a biomass
fraction (0.95 pinned, or computed from the reported post-boundary means),
after it the reported values are copied through.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .elexon import INTERCONNECTOR_FUELS, power_column
from .errors import ValidationError
from .tables import frame_to_csv_bytes, read_table_csv, write_frame_csv

BIOMASS_START_UTC = "2017-11-01T20:00:00+00:00"
OTHER_CLEAN_UTC = "2017-11-01T20:30:00+00:00"
PINNED_BIOMASS_FRACTION = 0.95

OTHER_COL = power_column("ELEXM", "OTHER")
BIOMASS_COL = power_column("ELEXM", "BIOMASS")
OTHER_POSTCALC = power_column("ELEXM", "OTHER_POSTCALC")
BIOMASS_POSTCALC = power_column("ELEXM", "BIOMASS_POSTCALC")

# The 25 output columns, in published order.
OUTPUT_COLUMNS = (
    "ELEXM_SETTLEMENT_DATE",
    "ELEXM_SETTLEMENT_PERIOD",
    "ELEXM_utc",
    "ELEXM_localtime",
    "ELEXM_ROWFLAG",
    "NGEM_ROWFLAG",
    "POWER_ESPENI_MW",
    "POWER_ELEXM_CCGT_MW",
    "POWER_ELEXM_OIL_MW",
    "POWER_ELEXM_COAL_MW",
    "POWER_ELEXM_NUCLEAR_MW",
    "POWER_ELEXM_WIND_MW",
    "POWER_ELEXM_PS_MW",
    "POWER_ELEXM_NPSHYD_MW",
    "POWER_ELEXM_OCGT_MW",
    "POWER_ELEXM_OTHER_POSTCALC_MW",
    "POWER_ELEXM_BIOMASS_POSTCALC_MW",
    "POWER_NGEM_EMBEDDED_SOLAR_GENERATION_MW",
    "POWER_NGEM_EMBEDDED_WIND_GENERATION_MW",
    "POWER_NGEM_BRITNED_FLOW_MW",
    "POWER_NGEM_EAST_WEST_FLOW_MW",
    "POWER_NGEM_MOYLE_FLOW_MW",
    "POWER_NGEM_NEMO_FLOW_MW",
    "POWER_NGEM_IFA_FLOW_MW",
    "POWER_NGEM_IFA2_FLOW_MW",
)

# Exactly these sum to the demand column; a missing cell contributes zero.
ESPENI_COMPONENTS = (
    "POWER_ELEXM_CCGT_MW",
    "POWER_ELEXM_OIL_MW",
    "POWER_ELEXM_COAL_MW",
    "POWER_ELEXM_NUCLEAR_MW",
    "POWER_ELEXM_WIND_MW",
    "POWER_ELEXM_PS_MW",
    "POWER_ELEXM_NPSHYD_MW",
    "POWER_ELEXM_OCGT_MW",
    "POWER_ELEXM_OTHER_POSTCALC_MW",
    "POWER_ELEXM_BIOMASS_POSTCALC_MW",
    "POWER_NGEM_EMBEDDED_SOLAR_GENERATION_MW",
    "POWER_NGEM_EMBEDDED_WIND_GENERATION_MW",
    "POWER_NGEM_BRITNED_FLOW_MW",
    "POWER_NGEM_EAST_WEST_FLOW_MW",
    "POWER_NGEM_MOYLE_FLOW_MW",
    "POWER_NGEM_NEMO_FLOW_MW",
    "POWER_NGEM_IFA_FLOW_MW",
    "POWER_NGEM_IFA2_FLOW_MW",
)


@dataclass(frozen=True)
class SplitRatio:
    """Biomass share of the pre-2017 OTHER category."""

    biomass_fraction: float
    mode: str  # "pinned" | "computed"
    biomass_start_utc: str = BIOMASS_START_UTC
    other_clean_utc: str = OTHER_CLEAN_UTC

    def __post_init__(self):
        if not 0.0 < self.biomass_fraction < 1.0:
            raise ValidationError(
                f"biomass fraction must be in (0, 1), got {self.biomass_fraction}"
            )
        if self.mode not in ("pinned", "computed"):
            raise ValidationError(f"unknown split mode {self.mode!r}")


def pinned_split_ratio(fraction: float = PINNED_BIOMASS_FRACTION) -> SplitRatio:
    return SplitRatio(fraction, "pinned")


def compute_split_ratio(table: pd.DataFrame) -> SplitRatio:
    """mean(BIOMASS) / (mean(BIOMASS) + mean(OTHER)) over rows from the
    first fully-separated half hour onward; falls back to the pinned 0.95
    when no usable post-boundary rows exist."""
    if BIOMASS_COL not in table.columns or OTHER_COL not in table.columns:
        return pinned_split_ratio()
    post = table[table["ELEXM_utc"] >= OTHER_CLEAN_UTC]
    if post.empty:
        return pinned_split_ratio()
    mean_b = post[BIOMASS_COL].mean()
    mean_o = post[OTHER_COL].mean()
    if pd.isna(mean_b) or pd.isna(mean_o) or (mean_b + mean_o) == 0:
        return pinned_split_ratio()
    fraction = float(mean_b) / float(mean_b + mean_o)
    if not 0.0 < fraction < 1.0:
        return pinned_split_ratio()
    return SplitRatio(fraction, "computed")


def split_other_biomass(table: pd.DataFrame, ratio: SplitRatio) -> pd.DataFrame:
    """Add the *_POSTCALC columns.

    Rows before the boundary split the OTHER+BIOMASS sum by the fraction
    (half-even rounding); rows from the first clean half hour copy the
    reported values, as does the single transition half hour in between.
    """
    out = table.copy()
    out.attrs.update(table.attrs)
    n = len(out)
    other = (
        out[OTHER_COL]
        if OTHER_COL in out.columns
        else pd.array([pd.NA] * n, dtype="Int64")
    )
    biomass = (
        out[BIOMASS_COL]
        if BIOMASS_COL in out.columns
        else pd.array([pd.NA] * n, dtype="Int64")
    )
    other = pd.Series(other, index=out.index)
    biomass = pd.Series(biomass, index=out.index)

    pre = out["ELEXM_utc"] < ratio.biomass_start_utc
    both_missing = other.isna() & biomass.isna()
    total = (other.fillna(0) + biomass.fillna(0)).astype("Int64")
    f = ratio.biomass_fraction
    split_b = pd.Series(
        np.round(f * total.to_numpy(dtype="float64")), index=out.index
    ).astype("Int64")
    split_o = pd.Series(
        np.round((1.0 - f) * total.to_numpy(dtype="float64")), index=out.index
    ).astype("Int64")

    biomass_post = biomass.copy()
    other_post = other.copy()
    biomass_post[pre] = split_b[pre]
    other_post[pre] = split_o[pre]
    biomass_post[pre & both_missing] = pd.NA
    other_post[pre & both_missing] = pd.NA

    out[OTHER_POSTCALC] = other_post.astype("Int64")
    out[BIOMASS_POSTCALC] = biomass_post.astype("Int64")
    return out


def merge_tables(elexon: pd.DataFrame, ng: pd.DataFrame) -> pd.DataFrame:
    """Left-join National Grid rows onto the Elexon spine.

    Elexon's interconnector columns are dropped first; keys without a
    National Grid row keep empty cells (including NGEM_ROWFLAG, which is
    never fabricated).
    """
    drop = [
        power_column("ELEXM", c)
        for c in INTERCONNECTOR_FUELS
        if power_column("ELEXM", c) in elexon.columns
    ]
    left = elexon.drop(columns=drop)
    merged = pd.merge(
        left, ng, how="left", left_on="ELEXM_SDSP_RAW", right_on="NGEM_SDSP_RAW"
    )
    for col in OUTPUT_COLUMNS:
        if col == "POWER_ESPENI_MW":
            continue
        if col not in merged.columns:
            merged[col] = pd.array([pd.NA] * len(merged), dtype="Int64")
    merged.attrs["source_files"] = list(elexon.attrs.get("source_files", [])) + list(
        ng.attrs.get("source_files", [])
    )
    return merged


def compute_espeni(table: pd.DataFrame) -> pd.DataFrame:
    """Set POWER_ESPENI_MW to the integer row sum of the 18 components."""
    missing = [c for c in ESPENI_COMPONENTS if c not in table.columns]
    if missing:
        raise ValidationError(
            f"cannot compute demand column, missing components: {', '.join(missing)}"
        )
    out = table.copy()
    out.attrs.update(table.attrs)
    total = sum(out[c].fillna(0) for c in ESPENI_COMPONENTS)
    out["POWER_ESPENI_MW"] = total.astype("Int64")
    return out


def _select_output(table: pd.DataFrame) -> pd.DataFrame:
    missing = [c for c in OUTPUT_COLUMNS if c not in table.columns]
    if missing:
        raise ValidationError(f"output columns missing: {', '.join(missing)}")
    return table[list(OUTPUT_COLUMNS)]


def write_espeni_csv(
    table: pd.DataFrame, variant: str, destination: str | Path | io.IOBase
) -> int:
    """Write the 25-column dataset (raw keeps original values behind flag=0
    rows, clean carries imputed ones); returns bytes written."""
    if variant not in ("raw", "clean"):
        raise ValidationError(f"variant must be 'raw' or 'clean', got {variant!r}")
    out = _select_output(table)
    if hasattr(destination, "write"):
        data = frame_to_csv_bytes(out)
        destination.write(data)
        return len(data)
    return write_frame_csv(out, destination)


def read_espeni_csv(source: str | Path) -> pd.DataFrame:
    """Read a written dataset back; values and missingness round-trip exactly."""
    df = read_table_csv(source)
    if tuple(df.columns) != OUTPUT_COLUMNS:
        raise ValidationError(f"not a 25-column espeni file: {source}")
    return df
