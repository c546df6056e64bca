"""Support vector machines: a linear primal solver and a kernel SMO solver.

The linear machine minimizes the mean hinge loss plus ||w||^2 / (2 C n) by
full-batch subgradient descent (deterministic, zero init). The kernel
machine solves the dual with sequential minimal optimization over
polynomial or RBF kernels; the partner index is drawn from a seeded
generator, so training is reproducible for a fixed seed.
"""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, StandardScaler, check_array, check_is_fitted, check_X_y


def linear_kernel(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B.T


def polynomial_kernel(A, B, gamma: float, coef0: float, degree: int) -> np.ndarray:
    return (gamma * (A @ B.T) + coef0) ** degree


def rbf_kernel(A, B, gamma: float) -> np.ndarray:
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def resolve_gamma(gamma, X: np.ndarray) -> float:
    """'scale' resolves to 1 / (n_features * Var(X)) on the matrix the kernel sees."""
    if gamma == "scale":
        variance = float(X.var())
        if variance == 0.0:
            variance = 1.0
        return 1.0 / (X.shape[1] * variance)
    return float(gamma)


class LinearSVM(BaseEstimator):
    """Linear SVM trained on the primal hinge objective."""

    def __init__(self, C=1.0, step=0.1, n_iter=500, standardize=True):
        self.C = C
        self.step = step
        self.n_iter = n_iter
        self.standardize = standardize

    def fit(self, X, y) -> "LinearSVM":
        X, y = check_X_y(X, y)
        self.scaler_ = StandardScaler().fit(X) if self.standardize else None
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        n, d = X.shape
        signs = np.where(y == 1, 1.0, -1.0)
        lam = 1.0 / (self.C * n)
        w = np.zeros(d)
        b = 0.0
        for t in range(self.n_iter):
            margins = signs * (X @ w + b)
            active = margins < 1.0
            grad_w = lam * w - (signs[active, None] * X[active]).sum(axis=0) / n
            grad_b = -signs[active].sum() / n
            eta = self.step / (1.0 + 0.01 * t)
            w -= eta * grad_w
            b -= eta * grad_b
        self.coef_ = w
        self.intercept_ = b
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

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)


class KernelSVM(BaseEstimator):
    """Kernel SVM trained by simplified sequential minimal optimization."""

    def __init__(
        self,
        kernel="rbf",
        C=1.0,
        degree=3,
        coef0=1.0,
        gamma="scale",
        tol=1e-3,
        max_passes=5,
        max_iter=200,
        seed=0,
        standardize=True,
    ):
        self.kernel = kernel
        self.C = C
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.max_iter = max_iter
        self.seed = seed
        self.standardize = standardize

    def _kernel_matrix(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.kernel == "linear":
            return linear_kernel(A, B)
        if self.kernel == "poly":
            return polynomial_kernel(A, B, self.gamma_, self.coef0, self.degree)
        if self.kernel == "rbf":
            return rbf_kernel(A, B, self.gamma_)
        raise ValueError(f"unknown kernel {self.kernel!r}")

    def fit(self, X, y) -> "KernelSVM":
        X, y = check_X_y(X, y)
        self.scaler_ = StandardScaler().fit(X) if self.standardize else None
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        n = X.shape[0]
        signs = np.where(y == 1, 1.0, -1.0)
        self.gamma_ = resolve_gamma(self.gamma, X)
        K = self._kernel_matrix(X, X)

        rng = np.random.default_rng(self.seed)
        alpha = np.zeros(n)
        b = 0.0
        passes = 0
        iteration = 0
        C, tol = float(self.C), float(self.tol)
        while passes < self.max_passes and iteration < self.max_iter:
            iteration += 1
            changed = 0
            coefs = alpha * signs
            for i in range(n):
                e_i = float(K[i] @ coefs + b - signs[i])
                if not (
                    (signs[i] * e_i < -tol and alpha[i] < C)
                    or (signs[i] * e_i > tol and alpha[i] > 0)
                ):
                    continue
                j = int(rng.integers(0, n - 1))
                if j >= i:
                    j += 1
                e_j = float(K[j] @ coefs + b - signs[j])
                alpha_i, alpha_j = alpha[i], alpha[j]
                if signs[i] != signs[j]:
                    low = max(0.0, alpha_j - alpha_i)
                    high = min(C, C + alpha_j - alpha_i)
                else:
                    low = max(0.0, alpha_i + alpha_j - C)
                    high = min(C, alpha_i + alpha_j)
                if low == high:
                    continue
                eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
                if eta >= 0:
                    continue
                new_j = alpha_j - signs[j] * (e_i - e_j) / eta
                new_j = min(high, max(low, new_j))
                if abs(new_j - alpha_j) < 1e-5:
                    continue
                new_i = alpha_i + signs[i] * signs[j] * (alpha_j - new_j)
                b1 = (
                    b
                    - e_i
                    - signs[i] * (new_i - alpha_i) * K[i, i]
                    - signs[j] * (new_j - alpha_j) * K[i, j]
                )
                b2 = (
                    b
                    - e_j
                    - signs[i] * (new_i - alpha_i) * K[i, j]
                    - signs[j] * (new_j - alpha_j) * K[j, j]
                )
                if 0 < new_i < C:
                    b = b1
                elif 0 < new_j < C:
                    b = b2
                else:
                    b = (b1 + b2) / 2.0
                alpha[i], alpha[j] = new_i, new_j
                coefs = alpha * signs
                changed += 1
            passes = passes + 1 if changed == 0 else 0

        support = alpha > 1e-8
        self.support_vectors_ = X[support]
        self.dual_coef_ = (alpha * signs)[support]
        self.intercept_ = b
        self.n_iter_ = iteration
        return self

    def _prepare(self, X) -> np.ndarray:
        check_is_fitted(self, "dual_coef_")
        X = check_array(X)
        if X.shape[1] != self.support_vectors_.shape[1]:
            raise ValueError(
                f"dimension mismatch: model has {self.support_vectors_.shape[1]} features, got {X.shape[1]}"
            )
        return self.scaler_.transform(X) if self.scaler_ is not None else X

    def decision_function(self, X) -> np.ndarray:
        X = self._prepare(X)
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self.intercept_)
        K = self._kernel_matrix(X, self.support_vectors_)
        return K @ self.dual_coef_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)
