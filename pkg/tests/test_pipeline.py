"""End-to-end pipeline: stage wrapping, file set, determinism, atomic writes."""

from __future__ import annotations

import json

import numpy as np
import pytest

from steelpower import linear, metrics
from steelpower.pipeline import ExperimentConfig, StageError, run_pipeline

EXPECTED_FILES = {
    "nulls.json",
    "hist_Lagging_Current_Reactive.Power_kVarh.csv",
    "hist_Leading_Current_Reactive_Power_kVarh.csv",
    "hist_CO2_tCO2.csv",
    "hist_Lagging_Current_Power_Factor.csv",
    "hist_Leading_Current_Power_Factor.csv",
    "hist_NSM.csv",
    "hist_Usage_kWh.csv",
    "correlation.csv",
    "ols.json",
    "ols_std.json",
    "ridge.json",
    "lasso.json",
    "ridge_path.csv",
    "lasso_path.csv",
    "knn_sweep.csv",
    "model_evaluation.txt",
    "metrics.json",
    "report.json",
}


def _config(week_csv_path, out_dir, **overrides) -> ExperimentConfig:
    defaults = dict(
        input_path=str(week_csv_path),
        out_dir=str(out_dir),
        grid_size=25,       # small grid keeps the unit test fast
        k_max=10,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


@pytest.fixture(scope="module")
def week_run(week_csv_path, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("run")
    config = _config(week_csv_path, out_dir)
    report = run_pipeline(config)
    return config, report, out_dir


def test_pipeline_writes_the_full_file_set(week_run):
    _, _, out_dir = week_run
    assert {p.name for p in out_dir.iterdir()} == EXPECTED_FILES


def test_report_structure(week_run):
    config, report, out_dir = week_run
    assert set(report.models) == {"ols", "ols_std", "ridge", "lasso", "knn"}
    assert set(report.model_evaluation) == {"ols", "ols_std", "ridge",
                                            "lasso", "knn"}
    prov = report.provenance
    assert prov["dataset_rows"] == 672
    assert prov["test_rows"] == 168
    assert prov["train_rows"] == 504
    assert prov["kernel_backend"] in ("compiled", "python")
    assert prov["config_hash"] == config.config_hash()
    assert len(prov["config_hash"]) == 64
    assert report.models["ridge"]["lambda_max"] > 0
    assert report.models["lasso"]["diagnostics"]["converged"] is True
    assert report.models["knn"]["excluded_feature"] == "Load_Type"
    assert 1 <= report.models["knn"]["best_k"] <= 10
    assert len(report.notes) >= 2
    on_disk = json.loads((out_dir / "report.json").read_text())
    assert on_disk["provenance"] == prov


def test_model_files_reload_and_score(week_run):
    _, report, out_dir = week_run
    model = linear.LinearModel.from_json((out_dir / "ols.json").read_text())
    assert model.method == "ols"
    coefs = dict((name, value)
                 for name, value in report.models["ols"]["coefficients"])
    assert coefs["CO2(tCO2)"] == model.coef[2]
    payload = json.loads((out_dir / "metrics.json").read_text())
    assert payload["ols"]["r_squared"] == report.model_evaluation["ols"]["r_squared"]
    assert payload["knn"]["accuracy"] is not None


def test_evaluation_table_lists_every_model(week_run):
    _, _, out_dir = week_run
    table = (out_dir / "model_evaluation.txt").read_text()
    lines = table.splitlines()
    assert lines[0].startswith("Model")
    for name in ("ols", "ols_std", "ridge", "lasso", "knn"):
        assert any(line.startswith(name) for line in lines[2:])


def test_identical_configs_are_byte_identical(week_csv_path, tmp_path):
    out_dir = tmp_path / "twice"
    config = _config(week_csv_path, out_dir)
    run_pipeline(config)
    first = {name: (out_dir / name).read_bytes() for name in EXPECTED_FILES}
    run_pipeline(config)
    for name in EXPECTED_FILES:
        assert (out_dir / name).read_bytes() == first[name], name


def test_lambda_override_changes_the_fit(week_csv_path, tmp_path, week_run):
    _, report_default, _ = week_run
    report = run_pipeline(_config(week_csv_path, tmp_path / "lam",
                                  lam=1e6))
    assert report.models["lasso"]["lambda"] == 1e6
    default_nonzero = sum(1 for _, v in
                          report_default.models["lasso"]["coefficients"] if v != 0)
    big_nonzero = sum(1 for _, v in
                      report.models["lasso"]["coefficients"] if v != 0)
    assert big_nonzero < default_nonzero


def test_standardize_target_adds_scaled_rows(week_csv_path, tmp_path):
    report = run_pipeline(_config(week_csv_path, tmp_path / "std_t",
                                  standardize_target=True))
    assert "ridge_std_target" in report.model_evaluation
    assert "lasso_std_target" in report.model_evaluation
    scaler = report.standardization["target_scaler"]
    assert scaler is not None and scaler["std"] > 0
    # raw-unit rows are still reported alongside the scaled ones
    raw = report.model_evaluation["ridge"]
    std = report.model_evaluation["ridge_std_target"]
    assert raw["rmse"] == pytest.approx(std["rmse"] * scaler["std"], rel=1e-9)


def test_unstandardized_variant(week_csv_path, tmp_path):
    report = run_pipeline(_config(week_csv_path, tmp_path / "raw",
                                  standardize_features=False))
    assert report.models["ridge"]["standardized_features"] is False
    assert report.models["knn"]["standardized_features"] is False
    # with raw features the penalized fits see very different column scales,
    # so the lambda anchor must differ from the standardized run
    std_report = run_pipeline(_config(week_csv_path, tmp_path / "std"))
    assert report.models["lasso"]["lambda_max"] != \
        std_report.models["lasso"]["lambda_max"]


def test_stage_errors_carry_the_stage_name(tmp_path, dirty_csv_path):
    missing = ExperimentConfig(input_path=str(tmp_path / "nope.csv"),
                               out_dir=str(tmp_path / "out"))
    with pytest.raises(StageError) as info:
        run_pipeline(missing)
    assert info.value.stage == "ingest"

    dirty = ExperimentConfig(input_path=str(dirty_csv_path),
                             out_dir=str(tmp_path / "out2"))
    with pytest.raises(StageError) as info:
        run_pipeline(dirty)
    assert info.value.stage == "encode"
    assert "null cells" in str(info.value)
    assert not (tmp_path / "out2").exists()  # nothing written on failure


def test_dirty_input_passes_with_drop_nulls(tmp_path, dirty_csv_path):
    report = run_pipeline(ExperimentConfig(
        input_path=str(dirty_csv_path), out_dir=str(tmp_path / "out"),
        drop_nulls=True, grid_size=25, k_max=10))
    assert report.provenance["dataset_rows"] == 669  # three rows dropped


def test_failed_write_cleans_up_partial_output(week_csv_path, tmp_path):
    out_dir = tmp_path / "blocked"
    (out_dir / "report.json").mkdir(parents=True)  # collides with a target name
    with pytest.raises(StageError) as info:
        run_pipeline(_config(week_csv_path, out_dir))
    assert info.value.stage == "write"
    leftovers = [p.name for p in out_dir.iterdir() if not p.is_dir()]
    assert leftovers == []


def test_config_hash_tracks_every_field(week_csv_path):
    base = _config(week_csv_path, "out")
    assert base.config_hash() == _config(week_csv_path, "out").config_hash()
    changed = _config(week_csv_path, "out", seed=43)
    assert changed.config_hash() != base.config_hash()


def test_metrics_table_and_json_agree(week_run):
    _, report, out_dir = week_run
    table = (out_dir / "model_evaluation.txt").read_text()
    ols_row = next(line for line in table.splitlines()
                   if line.startswith("ols "))
    r2 = report.model_evaluation["ols"]["r_squared"]
    assert f"{r2:.6f}" in ols_row
