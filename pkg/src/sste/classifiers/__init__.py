from .base import BaseEstimator, NotFittedError, StandardScaler, check_array, check_is_fitted, check_X_y
from .ensemble import (
    CLASSIFIER_IDS,
    ClassifierReport,
    EnsembleReport,
    TrainConfig,
    build_classifier,
    ensemble_evaluate,
    fit,
    predict,
)
from .forest import DecisionTree, RandomForest
from .logistic import LogisticRegression
from .metrics import EvalResult, confusion_matrix, evaluate
from .serialize import load_model, model_from_dict, model_to_dict, save_model
from .svm import KernelSVM, LinearSVM

__all__ = [
    "BaseEstimator",
    "CLASSIFIER_IDS",
    "ClassifierReport",
    "DecisionTree",
    "EnsembleReport",
    "EvalResult",
    "KernelSVM",
    "LinearSVM",
    "LogisticRegression",
    "NotFittedError",
    "RandomForest",
    "StandardScaler",
    "TrainConfig",
    "build_classifier",
    "check_X_y",
    "check_array",
    "check_is_fitted",
    "confusion_matrix",
    "ensemble_evaluate",
    "evaluate",
    "fit",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "save_model",
]
