"""SAR change detection: deep difference image, parallel FCM, PCANet + linear SVM."""

from ._sarcd import (
    DegenerateInputError,
    DegenerateTrainingError,
    ParameterError,
    PipelineConfig,
    SarcdError,
    baseline,
    deep_difference,
    evaluate,
    generate_pair,
    kappa,
    kernel_mean,
    log_ratio,
    normalize_center,
    pcc,
    pfcmc,
    pool_kernel,
    run_pipeline,
    sigmoid_map,
    sweep,
    weighted_pool,
)

__all__ = [
    "DegenerateInputError",
    "DegenerateTrainingError",
    "ParameterError",
    "PipelineConfig",
    "SarcdError",
    "baseline",
    "deep_difference",
    "evaluate",
    "generate_pair",
    "kappa",
    "kernel_mean",
    "log_ratio",
    "normalize_center",
    "pcc",
    "pfcmc",
    "pool_kernel",
    "run_pipeline",
    "sigmoid_map",
    "sweep",
    "weighted_pool",
]
