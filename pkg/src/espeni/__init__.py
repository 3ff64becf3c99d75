"""Reconstruct Great Britain's half-hourly electrical demand from publicly
available Elexon generation-by-fuel and National Grid embedded-generation /
interconnector data.

The result is a 25-column half-hourly table, in raw (errors flagged) and
clean (errors imputed) variants, with ISO 8601 UTC and Europe/London
localtime stamps.
"""

from .calendar import (
    CalendarEntry,
    CalendarTable,
    SettlementKey,
    default_range,
    generate_calendar,
    read_calendar_csv,
    write_calendar_csv,
)
from .config import PipelineConfig, load_config
from .elexon import (
    combine_years,
    normalize_periods,
    parse_fuelhh_file,
    validate_ranges,
)
from .errors import EspeniError
from .merge import (
    SplitRatio,
    compute_espeni,
    compute_split_ratio,
    merge_tables,
    pinned_split_ratio,
    read_espeni_csv,
    split_other_biomass,
    write_espeni_csv,
)
from .ng import combine_ng, parse_historic_demand_file
from .pipeline import run_pipeline
from .quality import (
    ErrorBlock,
    FlagEntry,
    FlagSet,
    apply_flags,
    detect_zero_drops,
    enumerate_blocks,
    impute,
    merge_flags,
    read_flag_csv,
    write_flag_csv,
)
from .reporting import (
    BeisMonthly,
    EnergyAggregate,
    aggregate_energy,
    compare_beis,
    error_summary,
    range_summary,
    read_beis_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BeisMonthly",
    "CalendarEntry",
    "CalendarTable",
    "EnergyAggregate",
    "ErrorBlock",
    "EspeniError",
    "FlagEntry",
    "FlagSet",
    "PipelineConfig",
    "SettlementKey",
    "SplitRatio",
    "aggregate_energy",
    "apply_flags",
    "combine_ng",
    "combine_years",
    "compare_beis",
    "compute_espeni",
    "compute_split_ratio",
    "default_range",
    "detect_zero_drops",
    "enumerate_blocks",
    "error_summary",
    "generate_calendar",
    "impute",
    "load_config",
    "merge_flags",
    "merge_tables",
    "normalize_periods",
    "parse_fuelhh_file",
    "parse_historic_demand_file",
    "pinned_split_ratio",
    "range_summary",
    "read_beis_csv",
    "read_calendar_csv",
    "read_espeni_csv",
    "read_flag_csv",
    "run_pipeline",
    "split_other_biomass",
    "validate_ranges",
    "write_calendar_csv",
    "write_espeni_csv",
    "write_flag_csv",
]
