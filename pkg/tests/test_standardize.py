"""Z-score standardization: population convention, constants, round trips."""

from __future__ import annotations

import numpy as np
import pytest

from steelpower import ingest, standardize
from steelpower.errors import DataError


def test_fit_columns_mean_and_population_std():
    X = np.array([[0.0, 1.0], [2.0, 3.0]])
    params = standardize.fit_columns(X)
    assert params.mean.tolist() == [1.0, 2.0]
    assert params.std.tolist() == [1.0, 1.0]  # population std: divide by n
    assert not params.constant.any()


def test_fit_columns_matches_numpy_population_std():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 4)) * np.array([1, 10, 0.1, 100])
    params = standardize.fit_columns(X)
    assert np.allclose(params.mean, X.mean(axis=0), atol=0)
    assert np.allclose(params.std, X.std(axis=0), atol=0)  # ddof=0


def test_transform_training_columns_to_zero_mean_unit_std():
    rng = np.random.default_rng(9)
    X = rng.normal(loc=5.0, scale=3.0, size=(200, 3))
    params = standardize.fit_columns(X)
    out = standardize.transform_columns(params, X)
    assert np.all(np.abs(out.mean(axis=0)) < 1e-12)
    assert np.all(np.abs(out.std(axis=0) - 1.0) < 1e-12)


def test_transform_applies_train_parameters_to_new_rows():
    train = np.array([[0.0], [2.0]])
    params = standardize.fit_columns(train)
    out = standardize.transform_columns(params, np.array([[4.0]]))
    assert out.tolist() == [[3.0]]  # (4 - 1) / 1, not the row's own z-score


def test_constant_column_warns_and_transforms_to_zero():
    X = np.array([[2.0, 1.0], [2.0, 3.0], [2.0, 5.0]])
    with pytest.warns(UserWarning, match="constant column"):
        params = standardize.fit_columns(X)
    assert params.constant.tolist() == [True, False]
    out = standardize.transform_columns(params, X)
    assert np.all(out[:, 0] == 0.0)
    assert np.abs(out[:, 1].mean()) < 1e-12


def test_params_json_round_trip():
    X = np.array([[1.0, 2.0], [3.0, 2.0]])
    with pytest.warns(UserWarning):
        params = standardize.fit_columns(X)
    restored = standardize.StandardizationParams.from_json(params.to_json())
    assert np.array_equal(restored.mean, params.mean)
    assert np.array_equal(restored.std, params.std)
    assert np.array_equal(restored.constant, params.constant)


def test_params_shape_validation():
    with pytest.raises(DataError, match="matching shapes"):
        standardize.StandardizationParams(
            mean=np.zeros(2), std=np.ones(3), constant=np.zeros(2, dtype=bool))
    with pytest.raises(DataError, match="positive std"):
        standardize.StandardizationParams(
            mean=np.zeros(1), std=np.zeros(1), constant=np.zeros(1, dtype=bool))


def test_transform_rejects_column_mismatch():
    params = standardize.fit_columns(np.array([[0.0], [2.0]]))
    with pytest.raises(DataError, match="expected 1 columns"):
        standardize.transform_columns(params, np.zeros((2, 3)))


def test_fit_rejects_empty_or_non_2d():
    with pytest.raises(DataError, match="non-empty 2-D"):
        standardize.fit_columns(np.zeros((0, 2)))
    with pytest.raises(DataError, match="non-empty 2-D"):
        standardize.fit_columns(np.zeros(4))


def test_dataset_wrappers(week_data):
    train, test = ingest.split(week_data, 0.25, seed=42)
    params = standardize.fit_standardizer(train)
    train_std = standardize.transform(params, train)
    test_std = standardize.transform(params, test)
    keep = ~params.constant
    assert np.all(np.abs(train_std.X[:, keep].mean(axis=0)) < 1e-10)
    assert np.all(np.abs(train_std.X[:, keep].std(axis=0) - 1.0) < 1e-10)
    # test rows use the train parameters, so their stats differ from 0/1
    assert train_std.feature_names == week_data.feature_names
    assert np.array_equal(test_std.y, test.y)
    assert np.array_equal(test_std.labels, test.labels)


def test_target_scaler_round_trip():
    y = np.array([1.0, 5.0, 9.0])
    scaler = standardize.fit_target_scaler(y)
    forward = scaler.forward(y)
    assert abs(forward.mean()) < 1e-15
    assert abs(forward.std() - 1.0) < 1e-15
    assert np.allclose(scaler.inverse(forward), y, atol=1e-12)


def test_target_scaler_rejects_constant_target():
    with pytest.raises(DataError, match="constant"):
        standardize.fit_target_scaler(np.full(5, 3.3))
    with pytest.raises(DataError, match="non-empty 1-D"):
        standardize.fit_target_scaler(np.zeros((2, 2)))
