from __future__ import annotations

from pathlib import Path

import pytest

from espeni.calendar import generate_calendar

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def calendar_2020():
    return generate_calendar("2020-01-01", "2020-12-31")


@pytest.fixture(scope="session")
def calendar_full():
    """The whole published era; generated once per session."""
    return generate_calendar("2008-01-01", "2021-12-31")


@pytest.fixture(scope="session")
def fixture_calendar():
    """Covers the checked-in 3-day fixture (includes the short day)."""
    return generate_calendar("2020-03-28", "2020-03-30")


@pytest.fixture(scope="session")
def calendar_csv(tmp_path_factory) -> Path:
    """A 2020-only calendar file so pipeline tests skip the default
    twenty-year generation."""
    from espeni.calendar import write_calendar_csv

    path = tmp_path_factory.mktemp("cal") / "masterdatetime_iso8601.csv"
    write_calendar_csv(generate_calendar("2020-01-01", "2020-12-31"), path)
    return path
