"""End-to-end pipeline: calendar, ingest, detect, impute, merge, write.

Deterministic by construction: identical source directories plus an
identical flag file produce byte-identical outputs, so a rerun can be
verified with the emitted checksums alone. Outputs are written to temporary
names and renamed into place only on success; an interrupted run never
leaves a partial dataset at its final path.
"""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path

import pandas as pd

from .calendar import (
    CalendarTable,
    default_range,
    generate_calendar,
    read_calendar_csv,
    write_calendar_csv,
)
from .config import PipelineConfig
from .elexon import (
    combine_years,
    discover_fuelhh_files,
    normalize_periods,
    parse_fuelhh_file,
)
from .errors import EspeniError, PipelineError, SchemaError
from .merge import (
    compute_espeni,
    compute_split_ratio,
    merge_tables,
    pinned_split_ratio,
    split_other_biomass,
    write_espeni_csv,
)
from .ng import combine_ng, discover_ng_files, parse_historic_demand_file
from .quality import (
    FlagSet,
    apply_flags,
    detect_zero_drops,
    impute,
    merge_flags,
    read_flag_csv,
)
from .reporting import error_summary, format_error_summary
from .tables import write_checksum_file


@contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except (EspeniError, OSError) as exc:
        raise PipelineError(name, exc) from exc


def load_or_generate_calendar(config: PipelineConfig) -> CalendarTable:
    if config.calendar_path and Path(config.calendar_path).is_file():
        return read_calendar_csv(config.calendar_path)
    table = generate_calendar(*default_range())
    if config.calendar_path:
        write_calendar_csv(table, config.calendar_path)
    return table


def ingest_elexon(directory: Path, calendar: CalendarTable) -> pd.DataFrame:
    files = discover_fuelhh_files(directory)
    if not files:
        raise SchemaError(f"no fuelhh*.csv files in {directory}")
    raws = [
        normalize_periods(parse_fuelhh_file(p.read_bytes(), p.name)) for p in files
    ]
    return combine_years(raws, calendar)


def ingest_ng(directory: Path, calendar: CalendarTable) -> pd.DataFrame:
    files = discover_ng_files(directory)
    if not files:
        raise SchemaError(f"no .csv files in {directory}")
    raws = [parse_historic_demand_file(p.read_bytes(), p.name) for p in files]
    return combine_ng(raws, calendar)


def run_pipeline(config: PipelineConfig, *, quiet: bool = False) -> int:
    """Run every stage and write espeni_raw.csv / espeni.csv plus checksums.

    Returns 0 on success; any stage failure raises PipelineError carrying
    the stage name.
    """
    config.require("elexon_dir", "ng_dir", "out_dir")

    def say(message: str) -> None:
        if not quiet:
            print(message)

    with _stage("calendar"):
        calendar = load_or_generate_calendar(config)

    with _stage("ingest-elexon"):
        elexon_table = ingest_elexon(Path(config.elexon_dir), calendar)
        say(f"elexon: {len(elexon_table)} rows from "
            f"{len(elexon_table.attrs['source_files'])} file(s)")

    with _stage("ingest-ng"):
        ng_table = ingest_ng(Path(config.ng_dir), calendar)
        say(f"ng: {len(ng_table)} rows from "
            f"{len(ng_table.attrs['source_files'])} file(s)")

    with _stage("detect"):
        auto = detect_zero_drops(elexon_table, config.detector_categories)

    with _stage("flags"):
        if config.flag_path and Path(config.flag_path).is_file():
            manual = read_flag_csv(config.flag_path)
        else:
            manual = FlagSet()
        flags = merge_flags(auto, manual)
        say(f"flags: {len(auto)} auto, {len(manual)} from file, {len(flags)} merged")

    with _stage("apply-impute"):
        elexon_raw = apply_flags(elexon_table, flags, erase=False)
        ng_raw = apply_flags(ng_table, flags, erase=False)
        elexon_clean = impute(apply_flags(elexon_table, flags, erase=True))
        ng_clean = impute(apply_flags(ng_table, flags, erase=True))

    with _stage("split"):
        if config.biomass_ratio_mode == "pinned":
            ratio = pinned_split_ratio(config.biomass_ratio)
        else:
            ratio = compute_split_ratio(elexon_clean)
        say(f"biomass split: {ratio.biomass_fraction:.4f} ({ratio.mode})")
        raw_split = split_other_biomass(elexon_raw, ratio)
        clean_split = split_other_biomass(elexon_clean, ratio)

    with _stage("merge"):
        raw_merged = compute_espeni(merge_tables(raw_split, ng_raw))
        clean_merged = compute_espeni(merge_tables(clean_split, ng_clean))

    with _stage("write"):
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = []
        for variant, table, name in (
            ("raw", raw_merged, "espeni_raw.csv"),
            ("clean", clean_merged, "espeni.csv"),
        ):
            path = out_dir / name
            n = write_espeni_csv(table, variant, path)
            sidecars = [write_checksum_file(path, "sha256")]
            if config.legacy_md5:
                sidecars.append(write_checksum_file(path, "md5"))
            outputs.append((path, n))
            say(f"wrote {path} ({n} bytes)")

    with _stage("report"):
        summary = error_summary(raw_merged, calendar)
        say(format_error_summary(summary).rstrip())

    return 0
