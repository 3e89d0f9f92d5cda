"""CSV ingestion: parsing, null detection, feature encoding, and splitting.

The raw file is a plain CSV with a header row. A SchemaConfig maps column
names to roles (target, label, date, numeric, categorical); encoding turns
the surviving columns into a dense float matrix:

* week-status columns (values Weekday/Weekend) become a single 0/1 column,
* day-of-week columns become seven one-hot columns (alphabetical order),
* the label column (load type) becomes an ordinal id, kept both as a
  regression feature and as the classification target,
* numeric columns pass through, the date column is validated and dropped.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .errors import DataError, EncodingError, ParseError, SchemaError

ROLE_TARGET = "target"
ROLE_LABEL = "label"
ROLE_DATE = "date"
ROLE_NUMERIC = "numeric"
ROLE_CATEGORICAL = "categorical"
_ROLES = (ROLE_TARGET, ROLE_LABEL, ROLE_DATE, ROLE_NUMERIC, ROLE_CATEGORICAL)

DEFAULT_NULL_MARKERS = ("", "?")

WEEK_STATUS_CODES = {"weekday": 0.0, "weekend": 1.0}
DAY_NAMES = ("Friday", "Monday", "Saturday", "Sunday", "Thursday", "Tuesday", "Wednesday")
LOAD_TYPE_CODES = {"light_load": 0, "medium_load": 1, "maximum_load": 2}
LOAD_TYPE_NAMES = ("Light_Load", "Medium_Load", "Maximum_Load")

_DATE_FORMATS = ("%d/%m/%Y %H:%M", "%Y-%m-%d %H:%M", "%Y-%m-%d %H:%M:%S")


@dataclass(frozen=True)
class SchemaConfig:
    """Column-name to role mapping plus the null-marker vocabulary."""

    roles: tuple[tuple[str, str], ...]
    null_markers: tuple[str, ...] = DEFAULT_NULL_MARKERS

    def __post_init__(self):
        seen = set()
        for column, role in self.roles:
            if role not in _ROLES:
                raise SchemaError(f"unknown role {role!r} for column {column!r}")
            if column in seen:
                raise SchemaError(f"column {column!r} mapped more than once")
            seen.add(column)
        if len(self.columns_with_role(ROLE_TARGET)) != 1:
            raise SchemaError("schema must map exactly one target column")
        if len(self.columns_with_role(ROLE_LABEL)) != 1:
            raise SchemaError("schema must map exactly one label column")

    def columns_with_role(self, role: str) -> tuple[str, ...]:
        return tuple(c for c, r in self.roles if r == role)

    @property
    def target(self) -> str:
        return self.columns_with_role(ROLE_TARGET)[0]

    @property
    def label(self) -> str:
        return self.columns_with_role(ROLE_LABEL)[0]

    @property
    def required_columns(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.roles)


def default_schema() -> SchemaConfig:
    """Role mapping for the standard steel-plant consumption header."""
    return SchemaConfig(roles=(
        ("date", ROLE_DATE),
        ("Usage_kWh", ROLE_TARGET),
        ("Lagging_Current_Reactive.Power_kVarh", ROLE_NUMERIC),
        ("Leading_Current_Reactive_Power_kVarh", ROLE_NUMERIC),
        ("CO2(tCO2)", ROLE_NUMERIC),
        ("Lagging_Current_Power_Factor", ROLE_NUMERIC),
        ("Leading_Current_Power_Factor", ROLE_NUMERIC),
        ("NSM", ROLE_NUMERIC),
        ("WeekStatus", ROLE_CATEGORICAL),
        ("Day_of_week", ROLE_CATEGORICAL),
        ("Load_Type", ROLE_LABEL),
    ))


def load_schema(text: str) -> SchemaConfig:
    """Parse a key=value schema config (one `column=role` line each).

    Blank lines and `#` comments are ignored. The special key `null_markers`
    takes a comma-separated list of cell values to treat as null.
    """
    roles: list[tuple[str, str]] = []
    markers = DEFAULT_NULL_MARKERS
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SchemaError(f"schema line {lineno} is not key=value: {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "null_markers":
            markers = tuple(part.strip() for part in value.split(","))
            continue
        roles.append((key, value))
    if not roles:
        raise SchemaError("schema config declares no columns")
    return SchemaConfig(roles=tuple(roles), null_markers=markers)


@dataclass(frozen=True)
class RawTable:
    """Header names plus row-major cells; None marks a null cell."""

    columns: tuple[str, ...]
    rows: tuple[tuple[str | None, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise SchemaError(f"column {name!r} not present in table") from None

    def column(self, name: str) -> list[str | None]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]


def parse_csv(text: str, schema: SchemaConfig) -> RawTable:
    """Parse CSV text into a RawTable, mapping null markers to None.

    Raises ParseError for structural problems (no header, ragged rows) and
    SchemaError when a schema-required column is missing from the header.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("input is empty: no header row") from None
    if header and header[0].startswith("﻿"):
        header = [header[0].lstrip("﻿"), *header[1:]]
    columns = tuple(name.strip() for name in header)
    missing = [c for c in schema.required_columns if c not in columns]
    if missing:
        raise SchemaError(f"header is missing required columns: {', '.join(missing)}")

    markers = set(schema.null_markers)
    width = len(columns)
    rows: list[tuple[str | None, ...]] = []
    for rownum, record in enumerate(reader, start=1):
        if not record:
            continue  # stray blank line
        if len(record) != width:
            raise ParseError(
                f"row {rownum} has {len(record)} cells, expected {width}"
            )
        rows.append(tuple(
            None if cell.strip() in markers else cell for cell in record
        ))
    return RawTable(columns=columns, rows=tuple(rows))


def parse_csv_file(path: str, schema: SchemaConfig) -> RawTable:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return parse_csv(handle.read(), schema)


@dataclass(frozen=True)
class NullReport:
    """Per-column null counts over a table."""

    total_rows: int
    null_counts: tuple[tuple[str, int], ...]

    @property
    def total_nulls(self) -> int:
        return sum(count for _, count in self.null_counts)

    def count(self, column: str) -> int:
        for name, value in self.null_counts:
            if name == column:
                return value
        raise SchemaError(f"column {column!r} not present in null report")

    def to_json(self) -> str:
        payload = {
            "total_rows": self.total_rows,
            "total_nulls": self.total_nulls,
            "null_counts": dict(self.null_counts),
        }
        return json.dumps(payload, indent=2) + "\n"


def detect_nulls(table: RawTable) -> NullReport:
    """Count null cells per column."""
    counts = [0] * len(table.columns)
    for row in table.rows:
        for idx, cell in enumerate(row):
            if cell is None:
                counts[idx] += 1
    return NullReport(
        total_rows=table.n_rows,
        null_counts=tuple(zip(table.columns, counts)),
    )


def drop_null_rows(table: RawTable, schema: SchemaConfig) -> RawTable:
    """Remove rows with a null in any role-bearing column."""
    indices = [table.column_index(c) for c in schema.required_columns]
    kept = tuple(
        row for row in table.rows if all(row[i] is not None for i in indices)
    )
    return RawTable(columns=table.columns, rows=kept)


@dataclass(frozen=True)
class Dataset:
    """Encoded design matrix, regression target, and class labels."""

    X: np.ndarray
    y: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    target_name: str = "target"

    def __post_init__(self):
        if self.X.ndim != 2:
            raise DataError(f"X must be 2-D, got shape {self.X.shape}")
        n = self.X.shape[0]
        if self.y.shape != (n,) or self.labels.shape != (n,):
            raise DataError("X, y, and labels must agree on row count")
        if len(self.feature_names) != self.X.shape[1]:
            raise DataError("one feature name per column is required")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise DataError("feature names must be unique")
        if not np.all(np.isfinite(self.X)) or not np.all(np.isfinite(self.y)):
            raise DataError("X and y must be finite")
        if self.labels.size and not np.isin(self.labels, (0, 1, 2)).all():
            raise DataError("labels must be integer class ids in {0, 1, 2}")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise SchemaError(f"feature {name!r} not present in dataset") from None

    def without_feature(self, name: str) -> "Dataset":
        """Copy of the dataset with one feature column removed."""
        idx = self.feature_index(name)
        keep = [j for j in range(self.n_features) if j != idx]
        return Dataset(
            X=self.X[:, keep],
            y=self.y,
            labels=self.labels,
            feature_names=tuple(n for j, n in enumerate(self.feature_names) if j != idx),
            target_name=self.target_name,
        )

    def take(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            X=self.X[indices],
            y=self.y[indices],
            labels=self.labels[indices],
            feature_names=self.feature_names,
            target_name=self.target_name,
        )


def _canon(value: str) -> str:
    return value.strip().lower().replace(" ", "_")


_DAY_BY_CANON = {_canon(name): name for name in DAY_NAMES}


def _null_row_indices(table: RawTable, schema: SchemaConfig) -> list[int]:
    indices = [table.column_index(c) for c in schema.required_columns]
    return [
        rownum for rownum, row in enumerate(table.rows)
        if any(row[i] is None for i in indices)
    ]


def encode_features(table: RawTable, schema: SchemaConfig,
                    drop_nulls: bool = False) -> Dataset:
    """Encode a raw table into a Dataset.

    Columns expand in header order; a day-of-week column contributes seven
    one-hot columns named after the days (alphabetical). Null cells in
    role-bearing columns are an error unless drop_nulls is set.
    """
    if drop_nulls:
        table = drop_null_rows(table, schema)
    null_rows = _null_row_indices(table, schema)
    if null_rows:
        shown = ", ".join(str(i) for i in null_rows[:10])
        suffix = "" if len(null_rows) <= 10 else f" (and {len(null_rows) - 10} more)"
        raise EncodingError(
            f"null cells present in rows: {shown}{suffix}; "
            "clean the file or enable drop_nulls"
        )
    if table.n_rows == 0:
        raise DataError("table has no data rows to encode")

    columns: list[np.ndarray] = []
    names: list[str] = []
    labels: np.ndarray | None = None
    y: np.ndarray | None = None

    role_by_column = dict(schema.roles)
    for name in table.columns:
        role = role_by_column.get(name)
        if role is None:
            continue  # unmapped columns are ignored
        cells = table.column(name)
        if role == ROLE_DATE:
            _validate_dates(name, cells)
        elif role == ROLE_TARGET:
            y = _numeric_column(name, cells)
        elif role == ROLE_NUMERIC:
            columns.append(_numeric_column(name, cells))
            names.append(name)
        elif role == ROLE_LABEL:
            labels = _ordinal_labels(name, cells)
            columns.append(labels.astype(np.float64))
            names.append(name)
        elif role == ROLE_CATEGORICAL:
            encoded = _encode_categorical(name, cells)
            for col_name, values in encoded:
                columns.append(values)
                names.append(col_name)

    assert y is not None and labels is not None  # schema guarantees both roles
    X = np.column_stack(columns) if columns else np.empty((table.n_rows, 0))
    return Dataset(
        X=np.ascontiguousarray(X, dtype=np.float64),
        y=y,
        labels=labels,
        feature_names=tuple(names),
        target_name=schema.target,
    )


def _numeric_column(name: str, cells: list[str | None]) -> np.ndarray:
    values = np.empty(len(cells), dtype=np.float64)
    for i, cell in enumerate(cells):
        try:
            values[i] = float(cell)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise EncodingError(
                f"column {name!r} row {i}: cannot parse {cell!r} as a number"
            ) from None
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise EncodingError(f"column {name!r} row {bad}: non-finite value")
    return values


def _validate_dates(name: str, cells: list[str | None]) -> None:
    for i, cell in enumerate(cells):
        text = (cell or "").strip()
        for fmt in _DATE_FORMATS:
            try:
                datetime.strptime(text, fmt)
                break
            except ValueError:
                continue
        else:
            raise EncodingError(
                f"column {name!r} row {i}: cannot parse date {cell!r}"
            )


def _ordinal_labels(name: str, cells: list[str | None]) -> np.ndarray:
    values = np.empty(len(cells), dtype=np.int64)
    for i, cell in enumerate(cells):
        code = LOAD_TYPE_CODES.get(_canon(cell or ""))
        if code is None:
            raise EncodingError(
                f"column {name!r} row {i}: unknown load type {cell!r} "
                f"(expected one of {', '.join(LOAD_TYPE_NAMES)})"
            )
        values[i] = code
    return values


def _encode_categorical(name: str, cells: list[str | None]) -> list[tuple[str, np.ndarray]]:
    canon = [_canon(cell or "") for cell in cells]
    distinct = set(canon)
    if distinct <= set(WEEK_STATUS_CODES):
        values = np.array([WEEK_STATUS_CODES[c] for c in canon], dtype=np.float64)
        return [(name, values)]
    if distinct <= set(_DAY_BY_CANON):
        out = []
        for day in DAY_NAMES:  # alphabetical, one column each
            key = _canon(day)
            values = np.array([1.0 if c == key else 0.0 for c in canon])
            out.append((day, values))
        return out
    # generic fallback: one-hot over the observed categories
    categories = sorted(distinct)
    if len(categories) == 1:
        return [(f"{name}={categories[0]}", np.ones(len(cells), dtype=np.float64))]
    return [
        (f"{name}={cat}", np.array([1.0 if c == cat else 0.0 for c in canon]))
        for cat in categories
    ]


def split_indices(n: int, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle of range(n) partitioned into (train, test) indices."""
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if n < 2:
        raise DataError(f"need at least 2 rows to split, got {n}")
    n_test = round(n * test_fraction)
    if n_test == 0 or n_test == n:
        raise DataError(
            f"test_fraction {test_fraction} leaves an empty partition for {n} rows"
        )
    perm = np.random.default_rng(seed).permutation(n)
    return perm[n_test:], perm[:n_test]


def split(data: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic train/test split: seeded shuffle, then partition."""
    train_idx, test_idx = split_indices(data.n_rows, test_fraction, seed)
    return data.take(train_idx), data.take(test_idx)
