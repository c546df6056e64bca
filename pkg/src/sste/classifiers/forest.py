"""Decision tree and random forest with Gini impurity splits.

Trees grow depth-first to purity (or the configured limits), choosing the
best threshold among midpoints of consecutive distinct values on a random
feature subset per node. The forest fits each tree on a bootstrap sample
with a per-tree generator seeded ``seed + tree_index``, so a forest is
reproducible and trees are independent of fitting order. Majority voting
breaks ties toward class 0 (legit).
"""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, check_array, check_is_fitted, check_X_y


def _leaf(y: np.ndarray) -> dict:
    ones = int(y.sum())
    zeros = len(y) - ones
    return {"leaf": True, "label": 1 if ones > zeros else 0, "counts": [zeros, ones]}


def _best_split(X, y, feature_indices, min_leaf: int):
    """Lowest weighted-Gini split over the candidate features.

    Returns (feature, threshold, left_mask) or None when no split separates
    the node. Ties resolve to the first candidate in feature order, then the
    lowest threshold, keeping tree construction deterministic.
    """
    n = len(y)
    best = None
    best_score = np.inf
    for feature in feature_indices:
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        sorted_col = column[order]
        sorted_y = y[order]
        ones = np.cumsum(sorted_y)
        total_ones = ones[-1]
        boundaries = np.flatnonzero(sorted_col[1:] > sorted_col[:-1])
        if boundaries.size == 0:
            continue
        n_left = boundaries + 1
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        n_left, n_right = n_left[valid], n_right[valid]
        cut = boundaries[valid]
        left_ones = ones[cut]
        right_ones = total_ones - left_ones
        p_left = left_ones / n_left
        p_right = right_ones / n_right
        gini_left = 2.0 * p_left * (1.0 - p_left)
        gini_right = 2.0 * p_right * (1.0 - p_right)
        weighted = (n_left * gini_left + n_right * gini_right) / n
        k = int(np.argmin(weighted))
        if weighted[k] < best_score - 1e-15:
            threshold = (sorted_col[cut[k]] + sorted_col[cut[k] + 1]) / 2.0
            best_score = float(weighted[k])
            best = (int(feature), float(threshold))
    if best is None:
        return None
    feature, threshold = best
    return feature, threshold, X[:, feature] <= threshold


class DecisionTree(BaseEstimator):
    """Binary CART-style classifier on Gini impurity."""

    def __init__(self, max_depth=None, min_samples_leaf=1, max_features=None, seed=0):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.seed = seed

    def _n_candidate_features(self, n_features: int) -> int:
        if self.max_features is None:
            return n_features
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        return min(n_features, int(self.max_features))

    def _grow(self, X, y, depth: int, rng: np.random.Generator) -> dict:
        if (
            len(np.unique(y)) == 1
            or (self.max_depth is not None and depth >= self.max_depth)
            or len(y) < 2 * self.min_samples_leaf
        ):
            return _leaf(y)
        n_features = X.shape[1]
        k = self._n_candidate_features(n_features)
        if k < n_features:
            candidates = rng.choice(n_features, size=k, replace=False)
        else:
            candidates = np.arange(n_features)
        split = _best_split(X, y, candidates, self.min_samples_leaf)
        if split is None:
            return _leaf(y)
        feature, threshold, left_mask = split
        if not left_mask.any() or left_mask.all():
            return _leaf(y)
        return {
            "leaf": False,
            "feature": feature,
            "threshold": threshold,
            "left": self._grow(X[left_mask], y[left_mask], depth + 1, rng),
            "right": self._grow(X[~left_mask], y[~left_mask], depth + 1, rng),
        }

    def fit(self, X, y, rng: np.random.Generator | None = None) -> "DecisionTree":
        X, y = check_X_y(X, y)
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        self.n_features_in_ = X.shape[1]
        self.tree_ = self._grow(X, y, depth=0, rng=rng)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "tree_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"dimension mismatch: model has {self.n_features_in_} features, got {X.shape[1]}"
            )
        out = np.empty(X.shape[0], dtype=np.int64)
        self._predict_into(self.tree_, X, np.arange(X.shape[0]), out)
        return out

    def _predict_into(self, node: dict, X, indices, out) -> None:
        if node["leaf"]:
            out[indices] = node["label"]
            return
        left = X[indices, node["feature"]] <= node["threshold"]
        if left.any():
            self._predict_into(node["left"], X, indices[left], out)
        if (~left).any():
            self._predict_into(node["right"], X, indices[~left], out)


class RandomForest(BaseEstimator):
    """Bagged Gini decision trees with majority voting."""

    def __init__(
        self,
        n_trees=100,
        max_depth=None,
        min_samples_leaf=1,
        max_features="sqrt",
        bootstrap=True,
        seed=0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def fit(self, X, y) -> "RandomForest":
        X, y = check_X_y(X, y)
        self.n_features_in_ = X.shape[1]
        self.trees_ = []
        for index in range(self.n_trees):
            rng = np.random.default_rng(self.seed + index)
            if self.bootstrap:
                sample = rng.integers(0, X.shape[0], size=X.shape[0])
                X_fit, y_fit = X[sample], y[sample]
                if len(np.unique(y_fit)) == 1:
                    # Degenerate bootstrap draw; a stump-leaf tree still votes.
                    tree = DecisionTree(
                        self.max_depth, self.min_samples_leaf, self.max_features
                    )
                    tree.n_features_in_ = X.shape[1]
                    tree.tree_ = _leaf(y_fit)
                    self.trees_.append(tree)
                    continue
            else:
                X_fit, y_fit = X, y
            tree = DecisionTree(self.max_depth, self.min_samples_leaf, self.max_features)
            tree.fit(X_fit, y_fit, rng=rng)
            self.trees_.append(tree)
        return self

    def predict(self, X) -> np.ndarray:
        votes = self.vote_fractions(X)
        return (votes > 0.5).astype(np.int64)

    def vote_fractions(self, X) -> np.ndarray:
        """Fraction of trees voting fake; ties at 0.5 predict legit."""
        check_is_fitted(self, "trees_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"dimension mismatch: model has {self.n_features_in_} features, got {X.shape[1]}"
            )
        total = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees_:
            total += tree.predict(X)
        return total / len(self.trees_)
