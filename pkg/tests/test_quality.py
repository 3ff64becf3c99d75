from __future__ import annotations

import io
from fractions import Fraction

import pandas as pd
import pytest
from hypothesis import given, strategies as st

from espeni.calendar import generate_calendar
from espeni.errors import ConfigError, ImputeError, ValidationError
from espeni.quality import (
    AUTO_ZERO_DROP_NOTE,
    ErrorBlock,
    FlagEntry,
    FlagSet,
    apply_flags,
    detect_zero_drops,
    enumerate_blocks,
    impute,
    interpolate_block,
    merge_flags,
    read_flag_csv,
    write_flag_csv,
)


def round_half_even(value: Fraction) -> int:
    """Independent rounding oracle: no reliance on round()."""
    floor = value.numerator // value.denominator
    remainder = value - floor
    if remainder > Fraction(1, 2):
        return floor + 1
    if remainder < Fraction(1, 2):
        return floor
    return floor if floor % 2 == 0 else floor + 1


def oracle_interpolation(a: int | None, b: int | None, length: int) -> list[int | None]:
    if a is None and b is None:
        return [None] * length
    if a is None:
        return [b] * length
    if b is None:
        return [a] * length
    return [
        round_half_even(Fraction(a) + Fraction(b - a) * i / (length + 1))
        for i in range(1, length + 1)
    ]


CAL = generate_calendar("2020-07-01", "2020-07-02")


def make_table(values: dict[str, list[int | None]], source: str = "ELEXM") -> pd.DataFrame:
    n = len(next(iter(values.values())))
    keys = [e.key.canonical_text for e in CAL.entries[:n]]
    data: dict[str, object] = {
        f"{source}_SDSP_RAW": keys,
        f"{source}_ROWFLAG": pd.array([1] * n, dtype="Int64"),
    }
    for name, column in values.items():
        data[f"POWER_{source}_{name}_MW"] = pd.array(column, dtype="Int64")
    df = pd.DataFrame(data)
    df.attrs["source"] = source
    return df


class TestDetect:
    def test_all_categories_zero_is_flagged(self):
        table = make_table(
            {"CCGT": [0, 1000], "NUCLEAR": [0, 0], "WIND": [3000, 1]}
        )
        flags = detect_zero_drops(table)
        assert len(flags) == 1
        entry = next(iter(flags))
        assert entry.flag == 0
        assert entry.note == AUTO_ZERO_DROP_NOTE
        assert entry.datesp == table["ELEXM_SDSP_RAW"].iloc[0]

    def test_partial_zero_not_flagged(self):
        table = make_table({"CCGT": [12000], "NUCLEAR": [0]})
        assert len(detect_zero_drops(table)) == 0

    def test_missing_is_not_zero(self):
        table = make_table({"CCGT": [None], "NUCLEAR": [0]})
        assert len(detect_zero_drops(table)) == 0

    def test_unknown_category(self):
        table = make_table({"CCGT": [1]})
        with pytest.raises(ConfigError):
            detect_zero_drops(table, ["CCGT", "FUSION"])

    def test_three_row_drop_matches_brute_force(self):
        n = 48
        ccgt = [10000] * n
        nuclear = [6000] * n
        for i in (20, 21, 22):
            ccgt[i] = nuclear[i] = 0
        table = make_table({"CCGT": ccgt, "NUCLEAR": nuclear})
        flags = detect_zero_drops(table)
        brute = [
            i for i in range(n) if ccgt[i] == 0 and nuclear[i] == 0
        ]
        assert flags.zero_keys("ELEXM") == [
            table["ELEXM_SDSP_RAW"].iloc[i] for i in brute
        ]
        blocks = enumerate_blocks(flags, CAL)
        assert blocks == [ErrorBlock("ELEXM", table["ELEXM_SDSP_RAW"].iloc[20], 3)]


class TestMergeFlags:
    def test_manual_overrides_auto(self):
        auto = FlagSet([FlagEntry("ELEXM", "2020-07-01_01", 0)])
        manual = FlagSet([FlagEntry("ELEXM", "2020-07-01_01", 1, "checked: fine")])
        merged = merge_flags(auto, manual)
        assert merged.get("ELEXM", "2020-07-01_01").flag == 1

    def test_disjoint_union(self):
        auto = FlagSet([FlagEntry("ELEXM", "2020-07-01_01", 0)])
        manual = FlagSet([FlagEntry("NGEM", "2020-07-01_02", 0)])
        assert len(merge_flags(auto, manual)) == 2

    def test_empty_manual_is_identity(self):
        auto = FlagSet([FlagEntry("ELEXM", "2020-07-01_01", 0)])
        merged = merge_flags(auto, FlagSet())
        assert list(merged) == list(auto)


class TestApplyFlags:
    def test_flagged_row_erased_everywhere(self):
        table = make_table({"CCGT": [1, 2, 3], "WIND": [4, 5, 6], "OIL": [7, 8, 9]})
        flags = FlagSet([FlagEntry("ELEXM", table["ELEXM_SDSP_RAW"].iloc[1], 0)])
        out = apply_flags(table, flags)
        assert out["ELEXM_ROWFLAG"].tolist() == [1, 0, 1]
        for col in ("CCGT", "WIND", "OIL"):
            assert pd.isna(out[f"POWER_ELEXM_{col}_MW"].iloc[1])
        # the input table keeps its original values for the raw variant
        assert table["POWER_ELEXM_CCGT_MW"].iloc[1] == 2

    def test_without_erase_only_flags_change(self):
        table = make_table({"CCGT": [1, 2]})
        flags = FlagSet([FlagEntry("ELEXM", table["ELEXM_SDSP_RAW"].iloc[0], 0)])
        out = apply_flags(table, flags, erase=False)
        assert out["ELEXM_ROWFLAG"].tolist() == [0, 1]
        assert out["POWER_ELEXM_CCGT_MW"].iloc[0] == 1

    def test_empty_flagset_is_identity(self):
        table = make_table({"CCGT": [1, 2]})
        out = apply_flags(table, FlagSet())
        assert out["ELEXM_ROWFLAG"].tolist() == [1, 1]
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == [1, 2]

    def test_unknown_key_skipped_and_reported(self):
        table = make_table({"CCGT": [1]})
        flags = FlagSet([FlagEntry("ELEXM", "1999-01-01_01", 0)])
        out = apply_flags(table, flags)
        assert out.attrs["skipped_flags"] == ["1999-01-01_01"]
        assert out["ELEXM_ROWFLAG"].tolist() == [1]

    def test_other_source_flags_ignored(self):
        table = make_table({"CCGT": [1]})
        flags = FlagSet([FlagEntry("NGEM", table["ELEXM_SDSP_RAW"].iloc[0], 0)])
        out = apply_flags(table, flags)
        assert out["ELEXM_ROWFLAG"].tolist() == [1]


def flagged_table(values: list[int | None], flagged: list[int]) -> pd.DataFrame:
    table = make_table({"CCGT": values})
    flags = FlagSet(
        FlagEntry("ELEXM", table["ELEXM_SDSP_RAW"].iloc[i], 0) for i in flagged
    )
    return apply_flags(table, flags)


class TestImpute:
    def test_midpoint(self):
        out = impute(flagged_table([100, None, 200], [1]))
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == [100, 150, 200]

    def test_equal_steps(self):
        out = impute(flagged_table([100, 0, 0, 0, 300], [1, 2, 3]))
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == [100, 150, 200, 250, 300]

    def test_length_nine_half_even(self):
        values = [0] + [5] * 9 + [1]
        out = impute(flagged_table(values, list(range(1, 10))))
        expected = [0] + oracle_interpolation(0, 1, 9) + [1]
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == expected
        assert expected == [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1]

    def test_boundary_block_copies_anchor(self):
        out = impute(flagged_table([7, 7, 42], [0, 1]))
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == [42, 42, 42]
        out = impute(flagged_table([13, 9, 9], [1, 2]))
        assert out["POWER_ELEXM_CCGT_MW"].tolist() == [13, 13, 13]

    def test_flags_stay_zero_after_imputation(self):
        out = impute(flagged_table([100, 0, 200], [1]))
        assert out["ELEXM_ROWFLAG"].tolist() == [1, 0, 1]

    def test_idempotent(self):
        once = impute(flagged_table([10, 0, 0, 95], [1, 2]))
        twice = impute(once)
        assert once.equals(twice)

    def test_era_column_stays_missing(self):
        table = make_table({"CCGT": [1, 2, 3], "INTNSL": [None, None, None]})
        flags = FlagSet([FlagEntry("ELEXM", table["ELEXM_SDSP_RAW"].iloc[1], 0)])
        out = impute(apply_flags(table, flags))
        assert pd.isna(out["POWER_ELEXM_INTNSL_MW"]).all()
        assert out["POWER_ELEXM_CCGT_MW"].iloc[1] == 2

    def test_every_row_flagged_is_an_error(self):
        table = flagged_table([1, 2], [0, 1])
        with pytest.raises(ImputeError):
            impute(table)

    def test_no_flags_is_identity(self):
        table = make_table({"CCGT": [5, 6]})
        assert impute(table)["POWER_ELEXM_CCGT_MW"].tolist() == [5, 6]

    @given(
        a=st.integers(min_value=-50000, max_value=50000),
        b=st.integers(min_value=-50000, max_value=50000),
        length=st.integers(min_value=1, max_value=9),
    )
    def test_block_values_match_oracle_and_stay_bounded(self, a, b, length):
        values = interpolate_block(a, b, length)
        assert values == oracle_interpolation(a, b, length)
        lo, hi = min(a, b), max(a, b)
        assert all(lo <= v <= hi for v in values)


class TestEnumerateBlocks:
    def test_consecutive_keys_one_block(self):
        keys = [e.key.canonical_text for e in CAL.entries[:3]]
        flags = FlagSet(FlagEntry("ELEXM", k, 0) for k in keys)
        assert enumerate_blocks(flags, CAL) == [ErrorBlock("ELEXM", keys[0], 3)]

    def test_gap_splits_blocks(self):
        keys = [CAL.entries[0].key.canonical_text, CAL.entries[2].key.canonical_text]
        flags = FlagSet(FlagEntry("ELEXM", k, 0) for k in keys)
        blocks = enumerate_blocks(flags, CAL)
        assert [b.length for b in blocks] == [1, 1]

    def test_runs_cross_midnight(self):
        # period 48 and next-day period 01 are adjacent in the calendar
        keys = ["2020-07-01_48", "2020-07-02_01"]
        flags = FlagSet(FlagEntry("ELEXM", k, 0) for k in keys)
        assert enumerate_blocks(flags, CAL) == [ErrorBlock("ELEXM", keys[0], 2)]

    def test_partition_invariant(self):
        import random

        rng = random.Random(3)
        keys = sorted(
            e.key.canonical_text for e in rng.sample(CAL.entries, 17)
        )
        flags = FlagSet(FlagEntry("ELEXM", k, 0) for k in keys)
        blocks = enumerate_blocks(flags, CAL)
        assert sum(b.length for b in blocks) == len(keys)

    def test_manual_flag_one_does_not_count(self):
        flags = FlagSet([FlagEntry("ELEXM", "2020-07-01_01", 1)])
        assert enumerate_blocks(flags, CAL) == []


class TestFlagCsv:
    def test_round_trip_sorted(self):
        flags = FlagSet(
            [
                FlagEntry("NGEM", "2020-07-01_02", 0, "manual", "2021-01-01T00:00:00+00:00"),
                FlagEntry("ELEXM", "2020-07-01_09", 0, AUTO_ZERO_DROP_NOTE),
                FlagEntry("ELEXM", "2020-07-01_01", 1, "note, with comma"),
            ]
        )
        buf = io.BytesIO()
        write_flag_csv(flags, buf)
        text = buf.getvalue().decode("utf-8")
        lines = text.splitlines()
        assert lines[0] == "source,datesp,flag,note,updated_utc"
        assert lines[1].startswith("ELEXM,2020-07-01_01,1")
        assert lines[2].startswith("ELEXM,2020-07-01_09,0")
        assert lines[3].startswith("NGEM,2020-07-01_02,0")
        again = read_flag_csv(io.BytesIO(buf.getvalue()))
        assert list(again) == list(flags)

    def test_invalid_entries_rejected(self):
        with pytest.raises(ValidationError):
            FlagEntry("ELEXM", "2020-07-01_01", 2)
        with pytest.raises(ValidationError):
            FlagEntry("SOLAR", "2020-07-01_01", 0)
