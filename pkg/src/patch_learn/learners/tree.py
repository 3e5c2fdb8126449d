"""
CART regression trees (weak learner for LSBoost)
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.config import LearnerKind
from ..core.exceptions import ContractViolation
from .base_learner import BaseLearner, as_inputs, as_training_data

logger = logging.getLogger(__name__)

# Split gains at or below this fraction of the node SSE count as zero
GAIN_TOL = 1e-12


@dataclass
class TreeNode:
    """Leaf when `feature` is None; otherwise x[feature] <= threshold goes left"""

    value: float
    n_samples: int
    feature: Optional[int] = None
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def to_dict(self) -> Dict[str, Any]:
        if self.is_leaf:
            return {"value": self.value, "n_samples": self.n_samples}
        return {
            "value": self.value,
            "n_samples": self.n_samples,
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TreeNode":
        if data.get("feature") is None:
            return cls(value=float(data["value"]), n_samples=int(data["n_samples"]))
        return cls(
            value=float(data["value"]),
            n_samples=int(data["n_samples"]),
            feature=int(data["feature"]),
            threshold=float(data["threshold"]),
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


@dataclass
class RegressionTree:
    root: TreeNode
    n_inputs: int
    max_depth: int
    min_leaf: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = as_inputs(X)
        if X.shape[1] != self.n_inputs:
            raise ContractViolation(
                f"Tree was grown on {self.n_inputs} inputs, got {X.shape[1]}"
            )
        out = np.empty(X.shape[0])
        _route(self.root, X, np.arange(X.shape[0]), out)
        return out

    @property
    def depth(self) -> int:
        return _depth(self.root)

    @property
    def n_leaves(self) -> int:
        return _count_leaves(self.root)


def _route(node: TreeNode, X: np.ndarray, rows: np.ndarray, out: np.ndarray):
    if node.is_leaf or rows.size == 0:
        out[rows] = node.value
        return
    goes_left = X[rows, node.feature] <= node.threshold
    _route(node.left, X, rows[goes_left], out)
    _route(node.right, X, rows[~goes_left], out)


def _depth(node: TreeNode) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(_depth(node.left), _depth(node.right))


def _count_leaves(node: TreeNode) -> int:
    if node.is_leaf:
        return 1
    return _count_leaves(node.left) + _count_leaves(node.right)


def best_split(
    X: np.ndarray, y: np.ndarray, min_leaf: int
) -> Optional[Tuple[int, float, float]]:
    """(feature, threshold, SSE reduction) of the best midpoint split, or None.

    Ties keep the lowest feature and, within a feature, the lowest threshold.
    """
    n = y.size
    if n < 2 * min_leaf:
        return None
    total, total_sq = y.sum(), (y**2).sum()
    parent_sse = total_sq - total**2 / n
    sizes = np.arange(1, n)
    best: Optional[Tuple[int, float, float]] = None

    for feature in range(X.shape[1]):
        order = np.argsort(X[:, feature], kind="mergesort")
        xs, ys = X[order, feature], y[order]
        left_sum = np.cumsum(ys)[:-1]
        left_sq = np.cumsum(ys**2)[:-1]
        right_sum, right_sq = total - left_sum, total_sq - left_sq
        sse = (left_sq - left_sum**2 / sizes) + (right_sq - right_sum**2 / (n - sizes))
        valid = (xs[:-1] < xs[1:]) & (sizes >= min_leaf) & (n - sizes >= min_leaf)
        if not valid.any():
            continue
        gains = np.where(valid, parent_sse - sse, -np.inf)
        i = int(np.argmax(gains))
        if best is None or gains[i] > best[2]:
            best = (feature, 0.5 * (xs[i] + xs[i + 1]), float(gains[i]))

    if best is None or best[2] <= GAIN_TOL * max(parent_sse, 1.0):
        return None
    return best


def _grow(
    X: np.ndarray, y: np.ndarray, depth: int, max_depth: int, min_leaf: int
) -> TreeNode:
    node = TreeNode(value=float(y.mean()), n_samples=int(y.size))
    if depth >= max_depth:
        return node
    split = best_split(X, y, min_leaf)
    if split is None:
        return node
    feature, threshold, _ = split
    goes_left = X[:, feature] <= threshold
    node.feature = feature
    node.threshold = float(threshold)
    node.left = _grow(X[goes_left], y[goes_left], depth + 1, max_depth, min_leaf)
    node.right = _grow(X[~goes_left], y[~goes_left], depth + 1, max_depth, min_leaf)
    return node


def tree_fit(
    X: np.ndarray, y: np.ndarray, max_depth: int = 4, min_leaf: int = 5
) -> RegressionTree:
    """Greedy variance-reduction tree; stops on depth, leaf size or zero gain"""
    if max_depth < 0 or min_leaf < 1:
        raise ContractViolation(
            f"Need max_depth >= 0 and min_leaf >= 1, got {max_depth}, {min_leaf}"
        )
    X, y = as_training_data(X, y)
    root = _grow(X, y, 0, max_depth, min_leaf)
    tree = RegressionTree(
        root=root, n_inputs=X.shape[1], max_depth=max_depth, min_leaf=min_leaf
    )
    logger.debug(f"Grew tree of depth {tree.depth} with {tree.n_leaves} leaves")
    return tree


class TreeLearner(BaseLearner):
    kind = LearnerKind.TREE

    def __init__(self, max_depth: int = 4, min_leaf: int = 5):
        super().__init__()
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.tree: Optional[RegressionTree] = None

    @classmethod
    def from_tree(cls, tree: RegressionTree) -> "TreeLearner":
        learner = cls(tree.max_depth, tree.min_leaf)
        learner.tree = tree
        learner.n_inputs = tree.n_inputs
        learner.is_fitted = True
        return learner

    def _fit(self, X: np.ndarray, y: np.ndarray):
        self.tree = tree_fit(X, y, self.max_depth, self.min_leaf)

    def _predict(self, X: np.ndarray) -> np.ndarray:
        return self.tree.predict(X)

    def clone(self) -> "TreeLearner":
        return TreeLearner(self.max_depth, self.min_leaf)
