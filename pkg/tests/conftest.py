"""Shared fixtures: synthetic CSV inputs at several scales.

The generator in `steelpower.synthetic` produces the standard 11-column
header, so every fixture here parses with the default schema. The small
fixtures keep unit tests fast; the full-year file is reserved for the
acceptance tests.
"""

from __future__ import annotations

import pytest

from steelpower import ingest, synthetic

# Handcrafted eight-row file with known cell values (two of each weekday
# covered below, one weekend row, all three load types).
MINI_CSV = """\
date,Usage_kWh,Lagging_Current_Reactive.Power_kVarh,Leading_Current_Reactive_Power_kVarh,CO2(tCO2),Lagging_Current_Power_Factor,Leading_Current_Power_Factor,NSM,WeekStatus,Day_of_week,Load_Type
01/01/2018 00:15,3.17,2.95,0.0,0.0,73.21,100.0,900,Weekday,Monday,Light_Load
01/01/2018 00:30,4.0,4.46,0.0,0.0,66.77,100.0,1800,Weekday,Monday,Light_Load
02/01/2018 10:00,118.0,52.15,0.0,0.05,91.48,100.0,36000,Weekday,Tuesday,Maximum_Load
03/01/2018 11:15,90.3,41.0,0.2,0.04,91.05,99.98,40500,Weekday,Wednesday,Medium_Load
04/01/2018 12:30,66.2,30.1,0.1,0.03,91.0,100.0,45000,Weekday,Thursday,Medium_Load
05/01/2018 14:45,101.5,47.2,0.0,0.04,90.66,100.0,53100,Weekday,Friday,Maximum_Load
06/01/2018 03:00,3.69,3.23,0.0,0.0,75.21,100.0,10800,Weekend,Saturday,Light_Load
07/01/2018 20:15,5.1,4.79,4.1,0.0,72.8,61.9,72900,Weekend,Sunday,Light_Load
"""


@pytest.fixture(scope="session")
def schema() -> ingest.SchemaConfig:
    return ingest.default_schema()


@pytest.fixture(scope="session")
def mini_csv_text() -> str:
    return MINI_CSV


@pytest.fixture(scope="session")
def mini_table(mini_csv_text, schema) -> ingest.RawTable:
    return ingest.parse_csv(mini_csv_text, schema)


@pytest.fixture(scope="session")
def mini_data(mini_table, schema) -> ingest.Dataset:
    return ingest.encode_features(mini_table, schema)


@pytest.fixture(scope="session")
def week_csv_text() -> str:
    """Seven generated days: all weekdays, a weekend, every load type."""
    return synthetic.generate_csv(n_days=7, seed=99)


@pytest.fixture(scope="session")
def week_table(week_csv_text, schema) -> ingest.RawTable:
    return ingest.parse_csv(week_csv_text, schema)


@pytest.fixture(scope="session")
def week_data(week_table, schema) -> ingest.Dataset:
    return ingest.encode_features(week_table, schema)


@pytest.fixture(scope="session")
def week_csv_path(tmp_path_factory, week_csv_text):
    path = tmp_path_factory.mktemp("data") / "week.csv"
    path.write_text(week_csv_text, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def dirty_csv_path(tmp_path_factory, week_csv_text):
    """The week file with a few cells blanked or replaced by '?'."""
    lines = week_csv_text.splitlines()
    for rownum, marker in ((3, ""), (5, "?"), (9, "?")):
        cells = lines[rownum].split(",")
        cells[1] = marker  # Usage_kWh
        lines[rownum] = ",".join(cells)
    path = tmp_path_factory.mktemp("data") / "dirty.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def full_csv_path(tmp_path_factory):
    """Full-year file (35,040 rows); used by the acceptance tests only."""
    path = tmp_path_factory.mktemp("data") / "steel_year.csv"
    synthetic.write_csv(str(path), n_days=365, seed=20180101)
    return path
