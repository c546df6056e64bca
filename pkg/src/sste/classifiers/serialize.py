"""Model persistence: versioned JSON blobs with exact round-trip.

Floats serialize through Python's repr, which json reproduces bit-for-bit,
so a reloaded model predicts identically to the one saved.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .base import StandardScaler
from .forest import DecisionTree, RandomForest
from .logistic import LogisticRegression
from .svm import KernelSVM, LinearSVM

FORMAT = "sste-model"
FORMAT_VERSION = 1

ALGORITHM_IDS = {
    LogisticRegression: "lr",
    LinearSVM: "svm_linear",
    KernelSVM: "kernel_svm",
    RandomForest: "rf",
    DecisionTree: "tree",
}


def _scaler_to_dict(scaler: StandardScaler | None) -> dict | None:
    if scaler is None:
        return None
    return {"mean": scaler.mean_.tolist(), "scale": scaler.scale_.tolist()}


def _scaler_from_dict(obj: dict | None) -> StandardScaler | None:
    if obj is None:
        return None
    scaler = StandardScaler()
    scaler.mean_ = np.array(obj["mean"], dtype=np.float64)
    scaler.scale_ = np.array(obj["scale"], dtype=np.float64)
    return scaler


def model_to_dict(model) -> dict:
    kind = ALGORITHM_IDS.get(type(model))
    if kind is None:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    blob = {
        "format": FORMAT,
        "version": FORMAT_VERSION,
        "kind": kind,
        "params": _jsonable_params(model.get_params()),
    }
    if kind == "lr":
        blob["state"] = {
            "coef": model.coef_.tolist(),
            "intercept": model.intercept_,
            "scaler": _scaler_to_dict(model.scaler_),
        }
    elif kind == "svm_linear":
        blob["state"] = {
            "coef": model.coef_.tolist(),
            "intercept": model.intercept_,
            "scaler": _scaler_to_dict(model.scaler_),
        }
    elif kind == "kernel_svm":
        blob["state"] = {
            "support_vectors": model.support_vectors_.tolist(),
            "dual_coef": model.dual_coef_.tolist(),
            "intercept": model.intercept_,
            "gamma": model.gamma_,
            "scaler": _scaler_to_dict(model.scaler_),
        }
    elif kind == "tree":
        blob["state"] = {"tree": model.tree_, "n_features": model.n_features_in_}
    elif kind == "rf":
        blob["state"] = {
            "n_features": model.n_features_in_,
            "trees": [tree.tree_ for tree in model.trees_],
        }
    return blob


def _jsonable_params(params: dict) -> dict:
    return {k: v for k, v in params.items() if isinstance(v, (int, float, str, bool, type(None)))}


def model_from_dict(blob: dict):
    if blob.get("format") != FORMAT:
        raise ValueError("not a serialized model blob")
    if blob.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model version {blob.get('version')!r}")
    kind = blob["kind"]
    params = blob.get("params", {})
    state = blob["state"]
    if kind == "lr":
        model = LogisticRegression(**params)
        model.coef_ = np.array(state["coef"], dtype=np.float64)
        model.intercept_ = float(state["intercept"])
        model.scaler_ = _scaler_from_dict(state["scaler"])
        return model
    if kind == "svm_linear":
        model = LinearSVM(**params)
        model.coef_ = np.array(state["coef"], dtype=np.float64)
        model.intercept_ = float(state["intercept"])
        model.scaler_ = _scaler_from_dict(state["scaler"])
        return model
    if kind == "kernel_svm":
        model = KernelSVM(**params)
        model.support_vectors_ = np.array(state["support_vectors"], dtype=np.float64)
        if model.support_vectors_.size == 0:
            model.support_vectors_ = model.support_vectors_.reshape(0, 0)
        model.dual_coef_ = np.array(state["dual_coef"], dtype=np.float64)
        model.intercept_ = float(state["intercept"])
        model.gamma_ = float(state["gamma"])
        model.scaler_ = _scaler_from_dict(state["scaler"])
        return model
    if kind == "tree":
        model = DecisionTree(**params)
        model.tree_ = state["tree"]
        model.n_features_in_ = int(state["n_features"])
        return model
    if kind == "rf":
        model = RandomForest(**params)
        model.n_features_in_ = int(state["n_features"])
        model.trees_ = []
        for tree_blob in state["trees"]:
            tree = DecisionTree(
                model.max_depth, model.min_samples_leaf, model.max_features
            )
            tree.tree_ = tree_blob
            tree.n_features_in_ = model.n_features_in_
            model.trees_.append(tree)
        return model
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path: str | Path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
