"""The five-classifier suite and its averaged report.

Every evaluation fits logistic regression, a random forest, and linear,
polynomial, and RBF support vector machines, then reports per-classifier
accuracy and F1 together with their arithmetic means. Scale-sensitive
learners (LR and the SVMs) standardize features by default; trees do not.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .base import check_array, check_X_y
from .forest import RandomForest
from .logistic import LogisticRegression
from .metrics import EvalResult, evaluate
from .svm import KernelSVM, LinearSVM

CLASSIFIER_IDS = ("lr", "svm_linear", "svm_poly", "svm_rbf", "rf")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the suite; defaults are the documented choices."""

    seed: int = 0
    standardize: bool = True
    lr_l2: float = 1e-4
    lr_step: float = 0.1
    lr_iters: int = 500
    svm_c: float = 1.0
    svm_step: float = 0.1
    svm_iters: int = 500
    svm_degree: int = 3
    svm_coef0: float = 1.0
    svm_gamma: float | str = "scale"
    svm_tol: float = 1e-3
    svm_max_passes: int = 5
    svm_max_iter: int = 200
    rf_trees: int = 100
    rf_max_features: int | str | None = "sqrt"
    rf_bootstrap: bool = True
    rf_min_leaf: int = 1
    rf_max_depth: int | None = None

    def __post_init__(self):
        for name in ("lr_iters", "svm_iters", "svm_max_passes", "svm_max_iter", "rf_trees", "rf_min_leaf"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("lr_step", "svm_step", "svm_tol", "svm_c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def build_classifier(algorithm: str, config: TrainConfig | None = None):
    """Construct one of the five classifiers from a TrainConfig."""
    config = config or TrainConfig()
    if algorithm == "lr":
        return LogisticRegression(
            l2=config.lr_l2,
            step=config.lr_step,
            n_iter=config.lr_iters,
            standardize=config.standardize,
        )
    if algorithm == "svm_linear":
        return LinearSVM(
            C=config.svm_c,
            step=config.svm_step,
            n_iter=config.svm_iters,
            standardize=config.standardize,
        )
    if algorithm in ("svm_poly", "svm_rbf"):
        return KernelSVM(
            kernel="poly" if algorithm == "svm_poly" else "rbf",
            C=config.svm_c,
            degree=config.svm_degree,
            coef0=config.svm_coef0,
            gamma=config.svm_gamma,
            tol=config.svm_tol,
            max_passes=config.svm_max_passes,
            max_iter=config.svm_max_iter,
            seed=config.seed,
            standardize=config.standardize,
        )
    if algorithm == "rf":
        return RandomForest(
            n_trees=config.rf_trees,
            max_depth=config.rf_max_depth,
            min_samples_leaf=config.rf_min_leaf,
            max_features=config.rf_max_features,
            bootstrap=config.rf_bootstrap,
            seed=config.seed,
        )
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {CLASSIFIER_IDS}")


def fit(algorithm: str, X, y, config: TrainConfig | None = None):
    """Fit one classifier; deterministic given (X, y, config.seed)."""
    model = build_classifier(algorithm, config)
    return model.fit(*check_X_y(X, y))


def predict(model, X) -> np.ndarray:
    """One label per row of X, applying the model's stored standardization."""
    return model.predict(check_array(X)) if len(np.asarray(X)) else np.array([], dtype=np.int64)


@dataclass(frozen=True)
class ClassifierReport:
    algorithm: str
    accuracy: float
    f1: float
    precision: float
    recall: float
    confusion: tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class EnsembleReport:
    """Per-classifier metrics plus their averages and exclusion counts."""

    reports: tuple[ClassifierReport, ...]
    avg_accuracy: float
    avg_f1: float
    n_train: int
    n_test: int
    excluded_train: int = 0
    excluded_test: int = 0

    def report_for(self, algorithm: str) -> ClassifierReport:
        for report in self.reports:
            if report.algorithm == algorithm:
                return report
        raise KeyError(algorithm)

    def to_dict(self) -> dict:
        return asdict(self)


def ensemble_evaluate(
    X_train,
    y_train,
    X_test,
    y_test,
    config: TrainConfig | None = None,
    excluded_train: int = 0,
    excluded_test: int = 0,
) -> EnsembleReport:
    """Fit all five classifiers on the training split and report each on the test split."""
    config = config or TrainConfig()
    X_train, y_train = check_X_y(X_train, y_train)
    X_test = check_array(X_test, name="X_test")
    y_test = np.asarray(y_test, dtype=np.int64)
    if X_test.shape[0] != y_test.shape[0]:
        raise ValueError("X_test and y_test lengths differ")
    reports = []
    for algorithm in CLASSIFIER_IDS:
        model = fit(algorithm, X_train, y_train, config)
        result: EvalResult = evaluate(y_test, model.predict(X_test))
        reports.append(
            ClassifierReport(
                algorithm=algorithm,
                accuracy=result.accuracy,
                f1=result.f1,
                precision=result.precision,
                recall=result.recall,
                confusion=result.confusion,
            )
        )
    return EnsembleReport(
        reports=tuple(reports),
        avg_accuracy=float(np.mean([r.accuracy for r in reports])),
        avg_f1=float(np.mean([r.f1 for r in reports])),
        n_train=int(X_train.shape[0]),
        n_test=int(X_test.shape[0]),
        excluded_train=excluded_train,
        excluded_test=excluded_test,
    )
