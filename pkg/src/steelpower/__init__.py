"""Steel-plant power consumption modeling.

Ingests interval-metered consumption CSVs, builds linear baselines (OLS,
ridge, LASSO) with regularization paths, classifies load type with a KNN
sweep, and reports MAE/MSE/RMSE/R^2/accuracy. See the `cli` module or the
`steelpower` console script for the end-to-end pipeline.
"""

from .eda import CorrelationMatrix, Histogram, correlation_matrix, histogram
from .errors import (
    DataError,
    EncodingError,
    NumericError,
    ParseError,
    SchemaError,
    SingularMatrixError,
    SteelPowerError,
)
from .ingest import (
    Dataset,
    NullReport,
    RawTable,
    SchemaConfig,
    default_schema,
    detect_nulls,
    drop_null_rows,
    encode_features,
    load_schema,
    parse_csv,
    parse_csv_file,
    split,
    split_indices,
)
from .kernels import backend_name, using_compiled
from .knn import KnnModel, KSweepResult, fit_knn, k_sweep, predict_batch, predict_knn
from .linear import (
    FitDiagnostics,
    LinearModel,
    RegularizationPath,
    fit_lasso,
    fit_ols,
    fit_ridge,
    lambda_grid,
    lambda_max,
    lasso_kkt_violation,
    predict,
    regularization_path,
    soft_threshold,
)
from .metrics import (
    MetricsReport,
    accuracy,
    evaluate_classification,
    evaluate_regression,
    mae,
    metrics_json,
    metrics_table,
    mse,
    r_squared,
    rmse,
)
from .pipeline import ExperimentConfig, ExperimentReport, StageError, run_pipeline
from .standardize import (
    StandardizationParams,
    TargetScaler,
    fit_standardizer,
    fit_target_scaler,
    transform,
)

__version__ = "0.1.0"
