"""Python interface to the fraudkit C++ core."""

import json

from ._fraudkit import (
    Classifier,
    DataError,
    Dataset,
    MetricError,
    ParamError,
    ZScoreStats,
    average_precision,
    confusion_at,
    enn,
    load_csv,
    pr_curve,
    roc_auc,
    roc_curve,
    rus,
    smote,
    smoteenn,
    stratified_kfold,
    stratified_split,
    write_csv,
    zscore_apply,
    zscore_fit,
)
from . import _fraudkit

__all__ = [
    "Classifier", "DataError", "Dataset", "MetricError", "ParamError", "ZScoreStats",
    "average_precision", "confusion_at", "enn", "load_csv", "make_classifier", "pr_curve",
    "preset_params", "randomized_search", "roc_auc", "roc_curve", "run_experiment", "run_grid",
    "rus", "smote", "smoteenn", "stratified_kfold", "stratified_split", "write_csv",
    "zscore_apply", "zscore_fit",
]


def make_classifier(family, params=None, seed=0):
    return _fraudkit.make_classifier(family, json.dumps(params or {}), seed)


def preset_params(dataset, family):
    return json.loads(_fraudkit.preset_params(dataset, family))


def randomized_search(family, train, grid=None, k=10, n_iter=5, seed=0, scoring="roc_auc"):
    """Cross-validated random search; `grid` maps names to candidate lists (None: built-in grid)."""
    grid_json = json.dumps(grid) if grid is not None else ""
    return json.loads(_fraudkit.randomized_search(family, train, grid_json, k, n_iter, seed, scoring))


def run_experiment(data_path, **spec):
    return json.loads(_fraudkit.run_experiment(json.dumps(spec), data_path))


def run_grid(raw, dataset, seed=0, out_dir="", retune=False):
    return json.loads(_fraudkit.run_grid(raw, dataset, seed, out_dir, retune))
