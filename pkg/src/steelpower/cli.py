"""Command-line interface.

Subcommands: inspect | split | train | path | knn-sweep | evaluate | report.

Exit codes: 0 success, 2 configuration/usage problems, 3 data problems
(missing or malformed input), 4 numeric failures, 1 unexpected errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import ingest, knn, linear, metrics, standardize
from .errors import DataError, NumericError, SteelPowerError
from .pipeline import ExperimentConfig, StageError, run_pipeline

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

TRAIN_MODELS = ("ols", "ridge", "lasso")


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _grid_size(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _add_common(parser: argparse.ArgumentParser, *, split_flags: bool = True) -> None:
    parser.add_argument("--input", required=True, help="input CSV path")
    parser.add_argument("--schema", default=None,
                        help="key=value column-role config (default: standard header)")
    parser.add_argument("--drop-nulls", action="store_true",
                        help="drop rows with null cells instead of failing")
    if split_flags:
        parser.add_argument("--test-fraction", type=_fraction, default=0.25)
        parser.add_argument("--seed", type=int, default=42)


def _add_standardize_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--standardize-features", default=True,
                        action=argparse.BooleanOptionalAction,
                        help="z-score features for ridge/lasso/knn (default: on)")
    parser.add_argument("--standardize-target", action="store_true",
                        help="also z-score the regression target")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steelpower",
        description="Steel-plant power consumption models: linear baselines, "
                    "regularization paths, and a load-type KNN classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="null report, histograms, correlation matrix")
    _add_common(p, split_flags=False)
    p.add_argument("--bins", type=_positive_int, default=30)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("split", help="deterministic train/test partition")
    _add_common(p)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="fit one linear model on the train split")
    _add_common(p)
    p.add_argument("--model", required=True, choices=TRAIN_MODELS)
    p.add_argument("--lambda", dest="lam", type=_nonneg_float, default=None,
                   help="penalty for ridge/lasso (default: lambda_max * 1e-2)")
    _add_standardize_flags(p)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("path", help="ridge/lasso coefficients along a lambda grid")
    _add_common(p)
    p.add_argument("--method", choices=("ridge", "lasso", "both"), default="both")
    p.add_argument("--grid-size", type=_grid_size, default=100)
    p.add_argument("--lambda-min-ratio", type=_fraction, default=1e-4)
    _add_standardize_flags(p)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("knn-sweep", help="k = 1..k_max error sweep for the classifier")
    _add_common(p)
    p.add_argument("--k-max", type=_positive_int, default=40)
    _add_standardize_flags(p)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_knn_sweep)

    p = sub.add_parser("evaluate", help="score a trained model bundle on the test split")
    _add_common(p)
    p.add_argument("--model-file", required=True, help="bundle written by `train`")
    p.add_argument("--out-dir", default=None,
                   help="also write evaluation.json here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="full pipeline: EDA, four fits, paths, knn, metrics")
    _add_common(p)
    p.add_argument("--bins", type=_positive_int, default=30)
    p.add_argument("--lambda", dest="lam", type=_nonneg_float, default=None)
    p.add_argument("--grid-size", type=_grid_size, default=100)
    p.add_argument("--lambda-min-ratio", type=_fraction, default=1e-4)
    p.add_argument("--k-max", type=_positive_int, default=40)
    _add_standardize_flags(p)
    p.add_argument("--out-dir", default="steelpower_out")
    p.set_defaults(func=cmd_report)

    return parser


# --- shared helpers ---------------------------------------------------------


def _load_schema(args) -> ingest.SchemaConfig:
    if args.schema is None:
        return ingest.default_schema()
    path = Path(args.schema)
    if not path.exists():
        print(f"[error] config: schema file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    return ingest.load_schema(path.read_text(encoding="utf-8"))


def _load_table(args, schema: ingest.SchemaConfig) -> ingest.RawTable:
    path = Path(args.input)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    return ingest.parse_csv(path.read_text(encoding="utf-8"), schema)


def _encoded(args):
    schema = _load_schema(args)
    table = _load_table(args, schema)
    data = ingest.encode_features(table, schema, drop_nulls=args.drop_nulls)
    return schema, table, data


def _write(out_dir: str, name: str, content: str) -> Path:
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    target = base / name
    target.write_text(content, encoding="utf-8")
    print(f"[info] wrote {target}")
    return target


def _default_lambda(X, y, lam: float | None) -> tuple[float, float]:
    anchor = linear.lambda_max(X, y)
    return (anchor * 1e-2 if lam is None else lam), anchor


# --- subcommands ------------------------------------------------------------


def cmd_inspect(args) -> int:
    schema = _load_schema(args)
    table = _load_table(args, schema)
    report = ingest.detect_nulls(table)
    print(report.to_json(), end="")
    _write(args.out_dir, "nulls.json", report.to_json())
    role_columns = schema.required_columns
    dirty = any(report.count(c) > 0 for c in role_columns)
    if dirty and not args.drop_nulls:
        print("[error] null cells present; re-run with --drop-nulls to continue",
              file=sys.stderr)
        return EXIT_DATA

    data = ingest.encode_features(table, schema, drop_nulls=args.drop_nulls)
    from .eda import correlation_matrix, histogram
    from .pipeline import _sanitize

    for name in schema.columns_with_role(ingest.ROLE_NUMERIC):
        values = data.X[:, data.feature_index(name)]
        hist = histogram(values, bins=args.bins, column=name)
        _write(args.out_dir, f"hist_{_sanitize(name)}.csv", hist.to_csv())
    target_hist = histogram(data.y, bins=args.bins, column=data.target_name)
    _write(args.out_dir, f"hist_{_sanitize(data.target_name)}.csv", target_hist.to_csv())
    corr = correlation_matrix(data, include_target=True)
    _write(args.out_dir, "correlation.csv", corr.to_csv())
    if corr.undefined_columns:
        print(f"[warn] zero-variance columns with undefined correlations: "
              f"{', '.join(corr.undefined_columns)}")
    return EXIT_OK


def _raw_csv(table: ingest.RawTable, indices: np.ndarray) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for i in indices:
        writer.writerow(["" if c is None else c for c in table.rows[int(i)]])
    return buffer.getvalue()


def cmd_split(args) -> int:
    schema = _load_schema(args)
    table = _load_table(args, schema)
    if args.drop_nulls:
        table = ingest.drop_null_rows(table, schema)
    ingest.encode_features(table, schema)  # validation only
    train_idx, test_idx = ingest.split_indices(table.n_rows,
                                               args.test_fraction, args.seed)
    _write(args.out_dir, "train.csv", _raw_csv(table, train_idx))
    _write(args.out_dir, "test.csv", _raw_csv(table, test_idx))
    summary = {
        "seed": args.seed,
        "test_fraction": args.test_fraction,
        "n_train": int(train_idx.shape[0]),
        "n_test": int(test_idx.shape[0]),
        "train_indices": [int(i) for i in train_idx],
        "test_indices": [int(i) for i in test_idx],
    }
    _write(args.out_dir, "split.json", json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_train(args) -> int:
    _, _, data = _encoded(args)
    train, _ = ingest.split(data, args.test_fraction, args.seed)

    params = None
    X = train.X
    if args.standardize_features:
        params = standardize.fit_columns(train.X)
        X = standardize.transform_columns(params, train.X)
    scaler = None
    y = train.y
    if args.standardize_target:
        scaler = standardize.fit_target_scaler(train.y)
        y = scaler.forward(train.y)

    diagnostics = None
    if args.model == "ols":
        if args.lam is not None:
            print("[error] config: --lambda only applies to ridge/lasso",
                  file=sys.stderr)
            return EXIT_CONFIG
        model = linear.fit_ols(X, y, rank_policy="min_norm")
        lam_anchor = None
    elif args.model == "ridge":
        lam, lam_anchor = _default_lambda(X, y, args.lam)
        model = linear.fit_ridge(X, y, lam, rank_policy="min_norm")
    else:
        lam, lam_anchor = _default_lambda(X, y, args.lam)
        model, diag = linear.fit_lasso(X, y, lam)
        diagnostics = {
            "iterations": diag.iterations,
            "max_change": diag.max_change,
            "converged": diag.converged,
            "objective": diag.objective,
        }
        if not diag.converged:
            print(f"[warn] lasso did not converge within "
                  f"{linear.DEFAULT_MAX_ITER} sweeps (max change "
                  f"{diag.max_change:.3e})")

    bundle = {
        "model": json.loads(model.to_json(feature_names=data.feature_names)),
        "standardizer": None if params is None else json.loads(params.to_json()),
        "target_scaler": None if scaler is None else
            {"mean": scaler.mean, "std": scaler.std},
        "split": {"test_fraction": args.test_fraction, "seed": args.seed},
        "lambda_max": lam_anchor,
        "diagnostics": diagnostics,
    }
    _write(args.out_dir, f"{args.model}.json",
           json.dumps(bundle, indent=2, sort_keys=True) + "\n")
    nonzero = int(np.count_nonzero(model.coef))
    print(f"[info] {args.model}: lambda={model.lam!r} intercept={model.intercept!r} "
          f"nonzero_coefficients={nonzero}/{model.n_features}")
    return EXIT_OK


def cmd_path(args) -> int:
    _, _, data = _encoded(args)
    train, _ = ingest.split(data, args.test_fraction, args.seed)
    X = train.X
    if args.standardize_features:
        X = standardize.transform_columns(standardize.fit_columns(train.X), train.X)
    y = train.y
    if args.standardize_target:
        y = standardize.fit_target_scaler(train.y).forward(train.y)

    methods = ("ridge", "lasso") if args.method == "both" else (args.method,)
    for method in methods:
        path = linear.regularization_path(
            X, y, method,
            grid_size=args.grid_size,
            lambda_min_ratio=args.lambda_min_ratio,
        )
        _write(args.out_dir, f"{method}_path.csv",
               path.to_csv(feature_names=data.feature_names))
        if method == "lasso" and not path.converged.all():
            bad = int((~path.converged).sum())
            print(f"[warn] lasso path: {bad} grid point(s) hit the sweep limit")
    return EXIT_OK


def cmd_knn_sweep(args) -> int:
    schema, _, data = _encoded(args)
    train, test = ingest.split(data, args.test_fraction, args.seed)
    if args.standardize_features:
        params = standardize.fit_standardizer(train)
        train_view = standardize.transform(params, train)
        test_view = standardize.transform(params, test)
    else:
        train_view, test_view = train, test
    X_train = train_view.without_feature(schema.label).X
    X_test = test_view.without_feature(schema.label).X

    model = knn.fit_knn(X_train, train.labels)
    sweep = knn.k_sweep(model, X_test, test.labels, k_max=args.k_max)
    predicted = knn.predict_batch(model, X_test, sweep.best_k)
    report = metrics.evaluate_classification("knn", test.labels, predicted)

    _write(args.out_dir, "knn_sweep.csv", sweep.to_csv())
    summary = {
        "best_k": sweep.best_k,
        "k_max": args.k_max,
        "accuracy_at_best_k": report.accuracy,
        "metrics": report.to_dict(),
        "note": "mae/mse/rmse are computed on ordinal class ids",
    }
    _write(args.out_dir, "knn.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"[info] best_k={sweep.best_k} accuracy={report.accuracy!r}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    path = Path(args.model_file)
    if not path.exists():
        print(f"[error] config: model file not found: {path}", file=sys.stderr)
        return EXIT_CONFIG
    bundle = json.loads(path.read_text(encoding="utf-8"))
    model = linear.LinearModel.from_json(json.dumps(bundle["model"]))

    _, _, data = _encoded(args)
    split_info = bundle.get("split") or {}
    test_fraction = split_info.get("test_fraction", args.test_fraction)
    seed = split_info.get("seed", args.seed)
    _, test = ingest.split(data, test_fraction, seed)

    X = test.X
    if bundle.get("standardizer") is not None:
        params = standardize.StandardizationParams.from_json(
            json.dumps(bundle["standardizer"]))
        X = standardize.transform_columns(params, test.X)
    predictions = linear.predict(model, X)
    scaler_info = bundle.get("target_scaler")
    if scaler_info is not None:
        scaler = standardize.TargetScaler(mean=scaler_info["mean"],
                                          std=scaler_info["std"])
        predictions = scaler.inverse(predictions)
    report = metrics.evaluate_regression(model.method, test.y, predictions)
    text = metrics.metrics_json([report])
    print(text, end="")
    if args.out_dir is not None:
        _write(args.out_dir, "evaluation.json", text)
    return EXIT_OK


def cmd_report(args) -> int:
    config = ExperimentConfig(
        input_path=args.input,
        out_dir=args.out_dir,
        schema_path=args.schema,
        test_fraction=args.test_fraction,
        seed=args.seed,
        bins=args.bins,
        lam=args.lam,
        grid_size=args.grid_size,
        lambda_min_ratio=args.lambda_min_ratio,
        k_max=args.k_max,
        standardize_features=args.standardize_features,
        standardize_target=args.standardize_target,
        drop_nulls=args.drop_nulls,
    )
    report = run_pipeline(config)
    table = Path(args.out_dir) / "model_evaluation.txt"
    print(table.read_text(encoding="utf-8"), end="")
    print(f"[info] report written to {args.out_dir} "
          f"(config hash {report.provenance['config_hash'][:12]})")
    return EXIT_OK


# --- entry point ------------------------------------------------------------


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    if isinstance(exc, (DataError, OSError)):
        return EXIT_DATA
    if isinstance(exc, SteelPowerError):
        return EXIT_DATA
    return EXIT_UNEXPECTED


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except StageError as exc:
        print(f"[error] {exc}", file=sys.stderr)
        return _exit_code(exc.cause)
    except (SteelPowerError, OSError) as exc:
        print(f"[error] {exc}", file=sys.stderr)
        return _exit_code(exc)
    except Exception as exc:  # pragma: no cover - defensive
        print(f"[error] unexpected: {exc!r}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    raise SystemExit(main())
