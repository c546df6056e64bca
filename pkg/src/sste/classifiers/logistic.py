"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, StandardScaler, check_array, check_is_fitted, check_X_y


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    expz = np.exp(z[~positive])
    out[~positive] = expz / (1.0 + expz)
    return out


class LogisticRegression(BaseEstimator):
    """L2-regularized logistic regression.

    Weights start at zero and follow the full-batch gradient, so training is
    deterministic; ``loss_history_`` records the regularized mean
    cross-entropy per iteration. The intercept is not regularized.
    """

    def __init__(self, l2=1e-4, step=0.1, n_iter=500, standardize=True):
        self.l2 = l2
        self.step = step
        self.n_iter = n_iter
        self.standardize = standardize

    def fit(self, X, y) -> "LogisticRegression":
        X, y = check_X_y(X, y)
        self.scaler_ = StandardScaler().fit(X) if self.standardize else None
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        target = y.astype(np.float64)
        history = []
        for _ in range(self.n_iter):
            p = _sigmoid(X @ w + b)
            eps = 1e-12
            loss = -np.mean(target * np.log(p + eps) + (1 - target) * np.log(1 - p + eps))
            history.append(loss + 0.5 * self.l2 * float(w @ w))
            grad_w = X.T @ (p - target) / n + self.l2 * w
            grad_b = float(np.mean(p - target))
            w -= self.step * grad_w
            b -= self.step * grad_b
        self.coef_ = w
        self.intercept_ = b
        self.loss_history_ = history
        return self

    def _prepare(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X)
        if X.shape[1] != self.coef_.shape[0]:
            raise ValueError(
                f"dimension mismatch: model has {self.coef_.shape[0]} features, got {X.shape[1]}"
            )
        return self.scaler_.transform(X) if self.scaler_ is not None else X

    def decision_function(self, X) -> np.ndarray:
        X = self._prepare(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)
