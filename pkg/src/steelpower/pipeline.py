"""End-to-end experiment pipeline.

One call runs ingest -> encode -> split -> EDA -> standardize -> fits ->
paths -> KNN sweep -> evaluation and renders every output file. All writes
happen together at the end; a failure in any stage aborts the run with the
stage name attached and removes whatever was already written, so an output
directory never holds a partial result set.

Model lineup (names used in the report):

* ols      - least squares on raw features
* ols_std  - least squares on standardized features
* ridge    - penalized fit, standardized features by default
* lasso    - penalized fit, standardized features by default
* knn      - load-type classifier on standardized features minus the
             load-type column, evaluated at the sweep's best k
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import eda, ingest, kernels, knn, linear, metrics, standardize
from .errors import SteelPowerError

OLS_NOTE = ("ols solved with the minimum-norm policy: the complete day-of-week "
            "one-hot block plus an intercept is rank-deficient by construction")
KNN_NOTE = "knn mae/mse/rmse are computed on ordinal class ids (0, 1, 2)"


class StageError(SteelPowerError):
    """Wraps any failure with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}': {cause}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a run; hashed into the report."""

    input_path: str
    out_dir: str
    schema_path: str | None = None
    test_fraction: float = 0.25
    seed: int = 42
    bins: int = 30
    lam: float | None = None          # None: lambda_max * 1e-2
    grid_size: int = 100
    lambda_min_ratio: float = 1e-4
    k_max: int = 40
    standardize_features: bool = True  # scaling for ridge/lasso/knn
    standardize_target: bool = False
    drop_nulls: bool = False

    def config_hash(self) -> str:
        canonical = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ExperimentReport:
    """Assembled results; `to_json` is the canonical on-disk form."""

    provenance: dict
    config: dict
    models: dict
    model_evaluation: dict
    eda: dict
    standardization: dict
    notes: tuple[str, ...]

    def to_json(self) -> str:
        payload = {
            "provenance": self.provenance,
            "config": self.config,
            "models": self.models,
            "model_evaluation": self.model_evaluation,
            "eda": self.eda,
            "standardization": self.standardization,
            "notes": list(self.notes),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _sanitize(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_")
    return cleaned or "column"


def _coef_table(model: linear.LinearModel, names: tuple[str, ...]) -> list:
    return [[name, float(value)] for name, value in zip(names, model.coef)]


class _Run:
    """Mutable state threaded through the pipeline stages."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.files: dict[str, str] = {}
        self.notes: list[str] = []
        self.models: dict = {}
        self.evaluation: list[metrics.MetricsReport] = []

    # --- stages -----------------------------------------------------------

    def ingest(self):
        cfg = self.config
        if cfg.schema_path is not None:
            with open(cfg.schema_path, "r", encoding="utf-8") as handle:
                self.schema = ingest.load_schema(handle.read())
        else:
            self.schema = ingest.default_schema()
        self.table = ingest.parse_csv_file(cfg.input_path, self.schema)
        self.null_report = ingest.detect_nulls(self.table)
        self.files["nulls.json"] = self.null_report.to_json()

    def encode(self):
        self.data = ingest.encode_features(self.table, self.schema,
                                           drop_nulls=self.config.drop_nulls)

    def split(self):
        self.train, self.test = ingest.split(self.data,
                                             self.config.test_fraction,
                                             self.config.seed)

    def explore(self):
        cfg = self.config
        hist_files = []
        numeric_names = self.schema.columns_with_role(ingest.ROLE_NUMERIC)
        for name in numeric_names:
            values = self.data.X[:, self.data.feature_index(name)]
            hist = eda.histogram(values, bins=cfg.bins, column=name)
            filename = f"hist_{_sanitize(name)}.csv"
            self.files[filename] = hist.to_csv()
            hist_files.append(filename)
        target_hist = eda.histogram(self.data.y, bins=cfg.bins,
                                    column=self.data.target_name)
        filename = f"hist_{_sanitize(self.data.target_name)}.csv"
        self.files[filename] = target_hist.to_csv()
        hist_files.append(filename)

        corr = eda.correlation_matrix(self.data, include_target=True)
        self.files["correlation.csv"] = corr.to_csv()
        self.eda_summary = {
            "histogram_files": hist_files,
            "correlation_file": "correlation.csv",
            "undefined_correlation_columns": list(corr.undefined_columns),
        }

    def standardize(self):
        self.params = standardize.fit_standardizer(self.train)
        self.train_std = standardize.transform(self.params, self.train)
        self.test_std = standardize.transform(self.params, self.test)
        if self.config.standardize_target:
            self.target_scaler = standardize.fit_target_scaler(self.train.y)
        else:
            self.target_scaler = None

    # feature/target views for the regularized models
    def _reg_matrices(self):
        if self.config.standardize_features:
            X_train, X_test = self.train_std.X, self.test_std.X
        else:
            X_train, X_test = self.train.X, self.test.X
        if self.target_scaler is not None:
            y_train = self.target_scaler.forward(self.train.y)
        else:
            y_train = self.train.y
        return X_train, X_test, y_train

    def fit(self):
        names = self.data.feature_names
        scaled_target = self.target_scaler is not None

        ols = linear.fit_ols(self.train.X, self.train.y, rank_policy="min_norm")
        self.notes.append(OLS_NOTE)
        self._register_linear("ols", ols, names, standardized_features=False,
                              standardized_target=False, diagnostics=None)

        y_std = (self.target_scaler.forward(self.train.y)
                 if scaled_target else self.train.y)
        ols_std = linear.fit_ols(self.train_std.X, y_std, rank_policy="min_norm")
        self._register_linear("ols_std", ols_std, names, standardized_features=True,
                              standardized_target=scaled_target, diagnostics=None)

        X_train, _, y_train = self._reg_matrices()
        self.lambda_anchor = linear.lambda_max(X_train, y_train)
        lam = self.config.lam if self.config.lam is not None \
            else self.lambda_anchor * 1e-2
        self.lam_used = float(lam)

        ridge = linear.fit_ridge(X_train, y_train, self.lam_used,
                                 rank_policy="min_norm")
        self._register_linear("ridge", ridge, names,
                              standardized_features=self.config.standardize_features,
                              standardized_target=scaled_target, diagnostics=None)

        lasso, diag = linear.fit_lasso(X_train, y_train, self.lam_used)
        self._register_linear("lasso", lasso, names,
                              standardized_features=self.config.standardize_features,
                              standardized_target=scaled_target, diagnostics=diag)

    def _register_linear(self, name, model, names, standardized_features,
                         standardized_target, diagnostics):
        entry = {
            "method": model.method,
            "lambda": float(model.lam),
            "intercept": float(model.intercept),
            "coefficients": _coef_table(model, names),
            "standardized_features": standardized_features,
            "standardized_target": standardized_target,
        }
        if diagnostics is not None:
            entry["diagnostics"] = {
                "iterations": int(diagnostics.iterations),
                "max_change": float(diagnostics.max_change),
                "converged": bool(diagnostics.converged),
                "objective": float(diagnostics.objective),
            }
        self.models[name] = entry
        self.files[f"{name}.json"] = model.to_json(feature_names=names)
        setattr(self, f"model_{name}", model)

    def paths(self):
        cfg = self.config
        X_train, _, y_train = self._reg_matrices()
        names = self.data.feature_names
        for method in ("ridge", "lasso"):
            path = linear.regularization_path(
                X_train, y_train, method,
                grid_size=cfg.grid_size,
                lambda_min_ratio=cfg.lambda_min_ratio,
            )
            self.files[f"{method}_path.csv"] = path.to_csv(feature_names=names)

    def classify(self):
        label_column = self.schema.label
        if self.config.standardize_features:
            train_view, test_view = self.train_std, self.test_std
        else:
            train_view, test_view = self.train, self.test
        X_train = train_view.without_feature(label_column).X
        X_test = test_view.without_feature(label_column).X

        model = knn.fit_knn(X_train, self.train.labels)
        sweep = knn.k_sweep(model, X_test, self.test.labels, k_max=self.config.k_max)
        self.files["knn_sweep.csv"] = sweep.to_csv()
        predicted = knn.predict_batch(model, X_test, sweep.best_k)
        self.knn_predicted = predicted
        self.models["knn"] = {
            "method": "knn",
            "best_k": int(sweep.best_k),
            "k_max": int(self.config.k_max),
            "excluded_feature": label_column,
            "standardized_features": self.config.standardize_features,
            "error_rate_at_best_k": float(sweep.error_rates[sweep.best_k - 1]),
        }
        self.notes.append(KNN_NOTE)

    def evaluate(self):
        scaler = self.target_scaler
        _, X_test_reg, _ = self._reg_matrices()

        def eval_regression(name, model, X_eval, scaled):
            raw_pred = linear.predict(model, X_eval)
            if scaled:
                std_pred = raw_pred
                raw_pred = scaler.inverse(std_pred)
                self.evaluation.append(metrics.evaluate_regression(
                    f"{name}_std_target", scaler.forward(self.test.y), std_pred))
            self.evaluation.append(
                metrics.evaluate_regression(name, self.test.y, raw_pred))

        scaled = scaler is not None
        eval_regression("ols", self.model_ols, self.test.X, False)
        eval_regression("ols_std", self.model_ols_std, self.test_std.X, scaled)
        eval_regression("ridge", self.model_ridge, X_test_reg, scaled)
        eval_regression("lasso", self.model_lasso, X_test_reg, scaled)
        self.evaluation.append(metrics.evaluate_classification(
            "knn", self.test.labels, self.knn_predicted))

        order = {report.model: report for report in self.evaluation}
        self.files["model_evaluation.txt"] = metrics.metrics_table(
            list(order.values()))
        self.files["metrics.json"] = metrics.metrics_json(list(order.values()))

    def report(self) -> ExperimentReport:
        cfg = self.config
        evaluation = {r.model: r.to_dict() for r in self.evaluation}
        for name in ("ridge", "lasso"):
            self.models[name]["lambda_max"] = float(self.lambda_anchor)
        provenance = {
            "config_hash": cfg.config_hash(),
            "seed": cfg.seed,
            "dataset_rows": int(self.data.n_rows),
            "train_rows": int(self.train.n_rows),
            "test_rows": int(self.test.n_rows),
            "kernel_backend": kernels.backend_name(),
        }
        standardization = {
            "mean": [float(v) for v in self.params.mean],
            "std": [float(v) for v in self.params.std],
            "constant": [bool(v) for v in self.params.constant],
            "target_scaler": None if self.target_scaler is None else {
                "mean": self.target_scaler.mean,
                "std": self.target_scaler.std,
            },
        }
        report = ExperimentReport(
            provenance=provenance,
            config=asdict(cfg),
            models=self.models,
            model_evaluation=evaluation,
            eda=self.eda_summary,
            standardization=standardization,
            notes=tuple(dict.fromkeys(self.notes)),
        )
        self.files["report.json"] = report.to_json()
        return report


def _write_outputs(out_dir: str, files: dict[str, str]) -> list[str]:
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name in sorted(files):
            target = base / name
            target.write_text(files[name], encoding="utf-8")
            written.append(target)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return [str(p) for p in written]


def run_pipeline(config: ExperimentConfig) -> ExperimentReport:
    """Run every stage and write the output files; returns the report."""
    run = _Run(config)
    stages = [
        ("ingest", run.ingest),
        ("encode", run.encode),
        ("split", run.split),
        ("eda", run.explore),
        ("standardize", run.standardize),
        ("fit", run.fit),
        ("path", run.paths),
        ("knn", run.classify),
        ("evaluate", run.evaluate),
    ]
    for stage_name, stage in stages:
        try:
            stage()
        except (StageError, KeyboardInterrupt, SystemExit):
            raise
        except BaseException as exc:
            raise StageError(stage_name, exc) from exc
    report = run.report()
    try:
        _write_outputs(config.out_dir, run.files)
    except BaseException as exc:
        raise StageError("write", exc) from exc
    return report
