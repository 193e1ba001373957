"""CART decision tree with Gini impurity, supporting two or more classes.

The same tree backs both the tweet classifier (binary, 512 hashed-bigram
features) and the audience group tree (multi-class over nine metadata
features), so splitting is fully deterministic: candidates are scanned in
ascending feature index and ascending threshold order, and only a strictly
better weighted child impurity replaces the current best.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from peernudge.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    InvalidDistributionError,
)


def gini_impurity(class_probs) -> float:
    """Gini impurity sum(p_i * (1 - p_i)) of a class distribution."""
    p = np.asarray(class_probs, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistributionError("class_probs must be a non-empty vector")
    if np.any(p < 0):
        raise InvalidDistributionError("probabilities must be nonnegative")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise InvalidDistributionError("probabilities must sum to 1")
    return float(np.sum(p * (1.0 - p)))


@dataclass
class TreeNode:
    """Internal node (feature/threshold set) or leaf (probs set)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    probs: np.ndarray | None = None
    n_samples: int = 0
    impurity: float = 0.0
    leaf_id: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.probs is not None

    def to_dict(self, feature_names=None) -> dict:
        if self.is_leaf:
            return {
                "probs": [float(v) for v in self.probs],
                "n_samples": self.n_samples,
                "impurity": self.impurity,
                "leaf_id": self.leaf_id,
            }
        name = feature_names[self.feature] if feature_names else None
        return {
            "feature": self.feature,
            "feature_name": name,
            "threshold": self.threshold,
            "n_samples": self.n_samples,
            "impurity": self.impurity,
            "left": self.left.to_dict(feature_names),
            "right": self.right.to_dict(feature_names),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "probs" in data:
            return cls(probs=np.asarray(data["probs"], dtype=np.float64),
                       n_samples=data.get("n_samples", 0),
                       impurity=data.get("impurity", 0.0),
                       leaf_id=data.get("leaf_id"))
        return cls(feature=data["feature"], threshold=data["threshold"],
                   n_samples=data.get("n_samples", 0),
                   impurity=data.get("impurity", 0.0),
                   left=cls.from_dict(data["left"]),
                   right=cls.from_dict(data["right"]))


def _node_probs(y_idx: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(y_idx, minlength=n_classes)
    return counts / counts.sum()


def _best_split(X: np.ndarray, y_idx: np.ndarray, n_classes: int, min_leaf: int):
    """Lowest weighted child Gini; ties go to the lowest feature then threshold.

    Returns (feature, threshold) or None when no candidate leaves both
    children with at least ``min_leaf`` samples.
    """
    n = X.shape[0]
    best = None
    best_score = np.inf
    for f in range(X.shape[1]):
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        sorted_vals = col[order]
        sorted_y = y_idx[order]
        # candidate split after position i whenever the value changes there
        change = np.nonzero(sorted_vals[:-1] != sorted_vals[1:])[0]
        if change.size == 0:
            continue
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), sorted_y] = 1.0
        cum = np.cumsum(onehot, axis=0)
        left_counts = cum[change]
        right_counts = cum[-1] - left_counts
        n_left = (change + 1).astype(np.float64)
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not np.any(valid):
            continue
        gini_left = 1.0 - np.sum((left_counts / n_left[:, None]) ** 2, axis=1)
        gini_right = 1.0 - np.sum((right_counts / n_right[:, None]) ** 2, axis=1)
        score = (n_left / n) * gini_left + (n_right / n) * gini_right
        score[~valid] = np.inf
        pos = int(np.argmin(score))  # first minimum = lowest threshold
        if score[pos] < best_score:
            best_score = float(score[pos])
            i = change[pos]
            threshold = (sorted_vals[i] + sorted_vals[i + 1]) / 2.0
            best = (f, float(threshold))
    return best


@dataclass
class DecisionTree:
    """Greedy CART classifier.

    Growth stops at ``max_depth`` (None = unbounded), when a node is pure,
    or when no split can keep ``min_leaf`` samples on both sides.  Zero-gain
    splits are still taken on impure nodes, so distinguishable classes are
    always separated eventually.
    """

    max_depth: int | None = None
    min_leaf: int = 1
    input_kind = "features"
    root: TreeNode | None = field(default=None, repr=False)
    classes_: np.ndarray | None = field(default=None, repr=False)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTree":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot fit a tree on an empty dataset")
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        self._n_features = X.shape[1]
        self.root = self._build(X, y_idx, depth=0)
        self._number_leaves()
        return self

    def _build(self, X: np.ndarray, y_idx: np.ndarray, depth: int) -> TreeNode:
        n_classes = len(self.classes_)
        probs = _node_probs(y_idx, n_classes)
        impurity = float(np.sum(probs * (1.0 - probs)))
        n = X.shape[0]
        depth_ok = self.max_depth is None or depth < self.max_depth
        if impurity > 0.0 and depth_ok and n >= 2 * self.min_leaf:
            split = _best_split(X, y_idx, n_classes, self.min_leaf)
            if split is not None:
                f, t = split
                mask = X[:, f] <= t
                # midpoints between adjacent floats can round onto the upper
                # value; never recurse with an empty child
                if mask.any() and not mask.all():
                    return TreeNode(
                        feature=f, threshold=t,
                        n_samples=n, impurity=impurity,
                        left=self._build(X[mask], y_idx[mask], depth + 1),
                        right=self._build(X[~mask], y_idx[~mask], depth + 1),
                    )
        return TreeNode(probs=probs, n_samples=n, impurity=impurity)

    def _number_leaves(self):
        counter = 0

        def walk(node: TreeNode):
            nonlocal counter
            if node.is_leaf:
                node.leaf_id = counter
                counter += 1
            else:
                walk(node.left)
                walk(node.right)

        walk(self.root)
        self.n_leaves = counter

    def _leaf_for(self, x: np.ndarray) -> TreeNode:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def route(self, x: np.ndarray) -> tuple[TreeNode, list[dict]]:
        """Leaf for ``x`` plus the decision path taken to reach it."""
        x = self._check_input(np.asarray(x, dtype=np.float64).ravel())
        node = self.root
        path = []
        while not node.is_leaf:
            went_left = bool(x[node.feature] <= node.threshold)
            path.append({"feature": int(node.feature),
                         "threshold": float(node.threshold),
                         "went_left": went_left})
            node = node.left if went_left else node.right
        return node, path

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        if self.root is None:
            raise DimensionMismatchError("tree is not fitted")
        if x.shape[-1] != self._n_features:
            raise DimensionMismatchError(
                f"expected {self._n_features} features, got {x.shape[-1]}"
            )
        return x

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self._check_input(X[0])
        return np.array([self._leaf_for(row).probs for row in X])

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Most probable class per row (first class wins exact ties)."""
        probs = self.predict_proba(X)
        return self.classes_[np.argmax(probs, axis=1)]

    def to_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "classes": self.classes_.tolist(),
            "n_features": self._n_features,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "DecisionTree":
        tree = cls(max_depth=params["max_depth"], min_leaf=params["min_leaf"])
        tree.classes_ = np.asarray(params["classes"])
        tree._n_features = params["n_features"]
        tree.root = TreeNode.from_dict(params["root"])
        tree._number_leaves()
        return tree
