from __future__ import annotations

import pandas as pd
import pytest

from espeni.calendar import generate_calendar
from espeni.errors import ParseError, SchemaError
from espeni.ng import (
    POWER_ORDER,
    combine_ng,
    parse_historic_demand_file,
)
from espeni.tables import frame_to_csv_bytes

HEADER = (
    "SETTLEMENT_DATE,SETTLEMENT_PERIOD,FORECAST_ACTUAL_INDICATOR,ND,"
    "EMBEDDED_WIND_GENERATION,EMBEDDED_SOLAR_GENERATION,IFA_FLOW,IFA2_FLOW,"
    "BRITNED_FLOW,MOYLE_FLOW,EAST_WEST_FLOW,NEMO_FLOW"
)


def ng_csv(rows: list[str], header: str = HEADER) -> str:
    return header + "\n" + "\n".join(rows) + "\n"


class TestParse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("01-APR-2015", "2015-04-01"),
            ("01-Apr-2005", "2005-04-01"),
            ("2020-03-28", "2020-03-28"),
        ],
    )
    def test_date_forms(self, text, expected):
        raw = parse_historic_demand_file(
            ng_csv([f"{text},1,A,30000,1,2,3,4,5,6,7,8"]), "d.csv"
        )
        assert raw["SETTLEMENT_DATE"].iloc[0] == expected
        assert raw["SDSP_RAW"].iloc[0] == f"{expected}_01"

    def test_bad_date_reports_row(self):
        rows = ["01-Apr-2015,1,A,1,1,1,1,1,1,1,1,1", "notadate,2,A,1,1,1,1,1,1,1,1,1"]
        with pytest.raises(ParseError, match="row 2"):
            parse_historic_demand_file(ng_csv(rows), "d.csv")

    def test_forecast_rows_dropped(self):
        rows = [
            "01-Apr-2015,1,A,1,10,1,1,1,1,1,1,1",
            "01-Apr-2015,2,F,1,99,1,1,1,1,1,1,1",
        ]
        raw = parse_historic_demand_file(ng_csv(rows), "d.csv")
        assert len(raw) == 1
        assert "FORECAST_ACTUAL_INDICATOR" not in raw.columns

    def test_only_retained_power_columns_kept(self):
        raw = parse_historic_demand_file(
            ng_csv(["01-Apr-2015,1,A,30000,1,2,3,4,5,6,7,8"]), "d.csv"
        )
        assert "ND" not in raw.columns
        assert set(POWER_ORDER) <= set(raw.columns)

    def test_aliases_map_to_canonical_names(self):
        header = "SETTLEMENT_DATE,SETTLEMENT_PERIOD,FRENCH_FLOW,INTNED_FLOW"
        raw = parse_historic_demand_file(
            ng_csv(["01-Apr-2010,1,-250,111"], header), "d.csv"
        )
        assert raw["IFA_FLOW"].iloc[0] == -250
        assert raw["BRITNED_FLOW"].iloc[0] == 111

    def test_within_file_duplicate_keeps_first(self):
        rows = [
            "01-Apr-2015,1,A,1,10,0,0,0,0,0,0,0",
            "01-Apr-2015,1,A,1,99,0,0,0,0,0,0,0",
        ]
        raw = parse_historic_demand_file(ng_csv(rows), "d.csv")
        assert len(raw) == 1
        assert raw["EMBEDDED_WIND_GENERATION"].iloc[0] == 10

    def test_negative_flows_preserved_exactly(self):
        raw = parse_historic_demand_file(
            ng_csv(["01-Apr-2015,1,A,1,0,0,-1000,0,-37,0,0,0"]), "d.csv"
        )
        assert raw["IFA_FLOW"].iloc[0] == -1000
        assert raw["BRITNED_FLOW"].iloc[0] == -37

    def test_missing_settlement_columns(self):
        with pytest.raises(SchemaError, match="d.csv"):
            parse_historic_demand_file("A,B\n1,2\n", "d.csv")


class TestCombine:
    def _raw(self, rows, name):
        return parse_historic_demand_file(ng_csv(rows), name)

    def test_cross_file_keeps_later_filename(self):
        cal = generate_calendar("2020-07-01", "2020-07-01")
        base = self._raw(
            [f"01-Jul-2020,{p},A,1,{p},0,0,0,0,0,0,0" for p in range(1, 49)],
            "demanddata_2020.csv",
        )
        update = self._raw(
            ["01-Jul-2020,5,A,1,555,0,0,0,0,0,0,0"], "demandupdate.csv"
        )
        table = combine_ng([update, base], cal)  # list order must not matter
        assert len(table) == 48
        assert table["POWER_NGEM_EMBEDDED_WIND_GENERATION_MW"].iloc[4] == 555
        assert table["POWER_NGEM_EMBEDDED_WIND_GENERATION_MW"].iloc[5] == 6

    def test_gaps_are_permitted(self):
        cal = generate_calendar("2020-07-01", "2020-07-01")
        table = combine_ng(
            [self._raw(["01-Jul-2020,1,A,1,1,1,1,1,1,1,1,1"], "d.csv")], cal
        )
        assert len(table) == 1  # no gap repair, no error

    def test_renamed_columns_and_flag(self):
        cal = generate_calendar("2020-07-01", "2020-07-01")
        table = combine_ng(
            [self._raw(["01-Jul-2020,1,A,1,1,2,3,4,5,6,7,8"], "d.csv")], cal
        )
        assert table["POWER_NGEM_EMBEDDED_SOLAR_GENERATION_MW"].iloc[0] == 2
        assert table["NGEM_ROWFLAG"].iloc[0] == 1
        assert table["NGEM_utc"].iloc[0] == "2020-06-30T23:00:00+00:00"

    def test_no_forecast_rows_survive(self):
        cal = generate_calendar("2020-07-01", "2020-07-01")
        rows = [f"01-Jul-2020,{p},{'F' if p % 2 else 'A'},1,1,1,1,1,1,1,1,1" for p in range(1, 9)]
        table = combine_ng([self._raw(rows, "d.csv")], cal)
        assert len(table) == 4

    def test_determinism_under_file_order(self):
        cal = generate_calendar("2020-07-01", "2020-07-01")
        a = self._raw(
            [f"01-Jul-2020,{p},A,1,{p},0,0,0,0,0,0,0" for p in range(1, 25)], "a.csv"
        )
        b = self._raw(
            [f"01-Jul-2020,{p},A,1,{p + 100},0,0,0,0,0,0,0" for p in range(20, 49)], "b.csv"
        )
        assert frame_to_csv_bytes(combine_ng([a, b], cal)) == frame_to_csv_bytes(
            combine_ng([b, a], cal)
        )
