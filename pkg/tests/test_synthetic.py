"""The bundled data generator: shape, determinism, and schema compliance."""

from __future__ import annotations

from datetime import datetime

import numpy as np
import pytest

from steelpower import ingest, synthetic


def test_header_matches_the_default_schema():
    header = synthetic.generate_csv(n_days=1, seed=1).splitlines()[0]
    assert tuple(header.split(",")) == ingest.default_schema().required_columns


def test_row_count_is_96_per_day():
    text = synthetic.generate_csv(n_days=3, seed=1)
    assert len(text.splitlines()) == 1 + 3 * 96


def test_generation_is_deterministic():
    a = synthetic.generate_csv(n_days=2, seed=5)
    b = synthetic.generate_csv(n_days=2, seed=5)
    c = synthetic.generate_csv(n_days=2, seed=6)
    assert a == b
    assert a != c


def test_write_csv_round_trips(tmp_path):
    path = tmp_path / "gen.csv"
    rows = synthetic.write_csv(str(path), n_days=2, seed=3)
    assert rows == 192
    assert path.read_text() == synthetic.generate_csv(n_days=2, seed=3)


def test_output_encodes_cleanly(week_table, week_data, schema):
    assert ingest.detect_nulls(week_table).total_nulls == 0
    assert week_data.n_rows == 672
    assert week_data.n_features == 15
    assert set(np.unique(week_data.labels)) == {0, 1, 2}
    weekend = week_data.X[:, week_data.feature_index("WeekStatus")]
    assert set(np.unique(weekend)) == {0.0, 1.0}


def test_dates_and_nsm_are_consistent(week_table):
    dates = week_table.column("date")
    nsm = week_table.column("NSM")
    for cell, seconds in zip(dates[:200], nsm[:200]):
        stamp = datetime.strptime(cell, "%d/%m/%Y %H:%M")
        assert int(seconds) == stamp.hour * 3600 + stamp.minute * 60


def test_weekend_flag_matches_day_name(week_table):
    for row_status, row_day in zip(week_table.column("WeekStatus"),
                                   week_table.column("Day_of_week")):
        expected = "Weekend" if row_day in ("Saturday", "Sunday") else "Weekday"
        assert row_status == expected


def test_load_bands_track_usage(week_data):
    usage = week_data.y
    labels = week_data.labels
    assert usage[labels == 0].mean() < usage[labels == 1].mean() \
        < usage[labels == 2].mean()


def test_generator_cli(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code = synthetic.main([str(path), "--days", "1", "--seed", "2"])
    assert code == 0
    assert "wrote 96 rows" in capsys.readouterr().out
    assert path.exists()
