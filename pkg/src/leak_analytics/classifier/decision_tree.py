"""CART-style decision tree over binary token-presence features."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import ClassifierError

logger = logging.getLogger(__name__)

# Class encoding used throughout the classifier
LEGAL = 0
ILLEGAL = 1
CLASS_NAMES = {LEGAL: "legal", ILLEGAL: "illegal"}

# Improvements below this are treated as ties with the parent impurity
_MIN_IMPROVEMENT = 1e-12


def gini(counts: Tuple[int, int]) -> float:
    """Gini impurity of a (legal, illegal) count pair."""
    total = counts[0] + counts[1]
    if total == 0:
        return 0.0
    p = np.asarray(counts, dtype=np.float64) / total
    return float(1.0 - np.sum(p**2))


def leaf_label(counts: Tuple[int, int]) -> int:
    """Majority class; ties go to illegal."""
    return ILLEGAL if counts[1] >= counts[0] else LEGAL


def split_scores(X: np.ndarray, y: np.ndarray, min_leaf: int = 1) -> np.ndarray:
    """Weighted child Gini impurity for splitting on each feature.

    Features whose split would leave a child with fewer than ``min_leaf``
    rows score ``inf``.

    Args:
        X: Binary feature matrix, one row per flow
        y: Class vector (0 legal, 1 illegal)
        min_leaf: Minimum rows per child

    Returns:
        np.ndarray: One score per feature, lower is better
    """
    X = np.asarray(X)
    y = np.asarray(y)
    n = len(y)
    present = X.sum(axis=0).astype(np.float64)
    present_illegal = X[y == ILLEGAL].sum(axis=0).astype(np.float64)
    absent = n - present
    absent_illegal = float(np.sum(y == ILLEGAL)) - present_illegal

    with np.errstate(divide="ignore", invalid="ignore"):
        p_present = present_illegal / present
        p_absent = absent_illegal / absent
        gini_present = 1.0 - (p_present**2 + (1.0 - p_present) ** 2)
        gini_absent = 1.0 - (p_absent**2 + (1.0 - p_absent) ** 2)
        scores = (present / n) * gini_present + (absent / n) * gini_absent

    invalid = (present < min_leaf) | (absent < min_leaf)
    scores[invalid] = np.inf
    return scores


def best_feature(scores: np.ndarray) -> int:
    """Lowest feature index whose score is within ``_MIN_IMPROVEMENT`` of the minimum.

    Equal splits reached along different arithmetic paths may differ in the
    last bits; they still count as ties.
    """
    scores = np.asarray(scores, dtype=np.float64)
    lowest = scores.min()
    if not np.isfinite(lowest):
        return 0
    return int(np.flatnonzero(scores <= lowest + _MIN_IMPROVEMENT)[0])


@dataclass
class TreeNode:
    """Internal node (feature set) or leaf (feature None)."""

    label: int
    counts: Tuple[int, int]
    feature: Optional[int] = None
    absent: Optional["TreeNode"] = None
    present: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def to_dict(self) -> Dict:
        if self.is_leaf:
            return {"label": CLASS_NAMES[self.label], "counts": list(self.counts)}
        return {
            "feature": self.feature,
            "label": CLASS_NAMES[self.label],
            "counts": list(self.counts),
            "absent": self.absent.to_dict(),
            "present": self.present.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TreeNode":
        label = ILLEGAL if data["label"] == "illegal" else LEGAL
        counts = tuple(int(c) for c in data["counts"])
        if "feature" not in data:
            return cls(label, counts)
        return cls(
            label,
            counts,
            int(data["feature"]),
            cls.from_dict(data["absent"]),
            cls.from_dict(data["present"]),
        )


class DecisionTreeModel:
    """Greedy top-down tree with Gini split selection.

    Splits are chosen by the lowest weighted child impurity, ties broken by
    the lowest feature index. A node becomes a leaf when it is pure, at
    ``max_depth``, too small to give both children ``min_leaf`` rows, or
    when no split lowers the impurity.
    """

    def __init__(self, max_depth: int = 12, min_leaf: int = 2):
        if max_depth < 1 or min_leaf < 1:
            raise ClassifierError("max_depth and min_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.root: Optional[TreeNode] = None
        self.n_features = 0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTreeModel":
        """Induce the tree.

        Raises:
            ClassifierError: Fewer than two classes or mismatched shapes
        """
        X = np.asarray(X, dtype=np.uint8)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != len(y):
            raise ClassifierError(f"feature matrix {X.shape} does not match {len(y)} labels")
        if len(np.unique(y)) < 2:
            raise ClassifierError("training data must contain both classes")

        self.n_features = X.shape[1]
        self.root = self._build_tree(X, y, 0)
        logger.debug(f"Trained tree: depth {self.depth}, {self.n_leaves} leaves")
        return self

    def _build_tree(self, X: np.ndarray, y: np.ndarray, depth: int) -> TreeNode:
        counts = (int(np.sum(y == LEGAL)), int(np.sum(y == ILLEGAL)))
        node = TreeNode(leaf_label(counts), counts)
        if 0 in counts or depth >= self.max_depth or len(y) < 2 * self.min_leaf:
            return node
        if X.shape[1] == 0:
            return node

        scores = split_scores(X, y, self.min_leaf)
        best = best_feature(scores)
        if not np.isfinite(scores[best]) or scores[best] > gini(counts) - _MIN_IMPROVEMENT:
            return node

        mask = X[:, best] == 1
        node.feature = best
        node.absent = self._build_tree(X[~mask], y[~mask], depth + 1)
        node.present = self._build_tree(X[mask], y[mask], depth + 1)
        return node

    def _check_fitted(self):
        if self.root is None:
            raise ClassifierError("tree is not trained")

    def leaf_for(self, bits: np.ndarray) -> TreeNode:
        """Leaf reached by a feature vector."""
        self._check_fitted()
        node = self.root
        while not node.is_leaf:
            node = node.present if bits[node.feature] else node.absent
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise ClassifierError(f"expected {self.n_features} features, got {X.shape[1]}")
        return np.array([self.leaf_for(row).label for row in X], dtype=np.int64)

    @property
    def depth(self) -> int:
        def _depth(node: TreeNode) -> int:
            return 0 if node.is_leaf else 1 + max(_depth(node.absent), _depth(node.present))

        self._check_fitted()
        return _depth(self.root)

    @property
    def n_leaves(self) -> int:
        def _leaves(node: TreeNode) -> int:
            return 1 if node.is_leaf else _leaves(node.absent) + _leaves(node.present)

        self._check_fitted()
        return _leaves(self.root)

    def internal_nodes(self):
        """Yield internal nodes in pre-order."""
        self._check_fitted()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                yield node
                stack.extend((node.present, node.absent))

    def to_dict(self) -> Dict:
        self._check_fitted()
        return {
            "maxDepth": self.max_depth,
            "minLeaf": self.min_leaf,
            "nFeatures": self.n_features,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "DecisionTreeModel":
        model = cls(int(data["maxDepth"]), int(data["minLeaf"]))
        model.n_features = int(data["nFeatures"])
        model.root = TreeNode.from_dict(data["root"])
        return model
