"""Test CART regression trees"""

from typing import Optional

import numpy as np
import pytest

from patch_learn.learners.tree import TreeLearner, TreeNode, best_split, tree_fit


def brute_force_split(X, y, min_leaf):
    """Exhaustive (feature, threshold) search over every midpoint"""
    n = y.size
    parent = float(((y - y.mean()) ** 2).sum())
    best = None
    for feature in range(X.shape[1]):
        values = np.unique(X[:, feature])
        for left_value, right_value in zip(values[:-1], values[1:]):
            threshold = 0.5 * (left_value + right_value)
            left = X[:, feature] <= threshold
            if left.sum() < min_leaf or n - left.sum() < min_leaf:
                continue
            sse = ((y[left] - y[left].mean()) ** 2).sum()
            sse += ((y[~left] - y[~left].mean()) ** 2).sum()
            gain = parent - sse
            if best is None or gain > best[2] + 1e-12:
                best = (feature, threshold, gain)
    return best


def brute_force_tree(X, y, depth, max_depth, min_leaf) -> TreeNode:
    node = TreeNode(value=float(y.mean()), n_samples=int(y.size))
    if depth >= max_depth or y.size < 2 * min_leaf:
        return node
    split = brute_force_split(X, y, min_leaf)
    if split is None or split[2] <= 1e-12:
        return node
    feature, threshold, _ = split
    left = X[:, feature] <= threshold
    node.feature, node.threshold = feature, threshold
    node.left = brute_force_tree(X[left], y[left], depth + 1, max_depth, min_leaf)
    node.right = brute_force_tree(X[~left], y[~left], depth + 1, max_depth, min_leaf)
    return node


def leaves(node: TreeNode, out: Optional[list] = None) -> list:
    out = [] if out is None else out
    if node.is_leaf:
        out.append(node)
    else:
        leaves(node.left, out)
        leaves(node.right, out)
    return out


class TestTreeFit:
    """Test tree growth"""

    def test_constant_labels(self):
        X = np.linspace(0, 1, 20).reshape(-1, 1)
        tree = tree_fit(X, np.full(20, 4.0), max_depth=3, min_leaf=1)
        assert tree.n_leaves == 1
        assert tree.predict(X) == pytest.approx(np.full(20, 4.0))

    def test_step_function(self):
        X = np.linspace(-1, 1, 20).reshape(-1, 1)
        y = (X[:, 0] > 0).astype(float)
        tree = tree_fit(X, y, max_depth=1, min_leaf=1)
        assert tree.root.threshold == pytest.approx(0.0, abs=1e-12)
        assert tree.root.left.value == 0.0
        assert tree.root.right.value == 1.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        X = rng.uniform(-1, 1, size=(20, 2))
        y = np.sin(3 * X[:, 0]) + X[:, 1] ** 2 + 0.1 * rng.normal(size=20)
        tree = tree_fit(X, y, max_depth=2, min_leaf=1)
        oracle = brute_force_tree(X, y, 0, 2, 1)
        probes = rng.uniform(-1, 1, size=(200, 2))
        expected = np.array([route(oracle, x) for x in np.vstack([X, probes])])
        assert tree.predict(np.vstack([X, probes])) == pytest.approx(expected)

    def test_leaf_invariants(self):
        rng = np.random.default_rng(5)
        X = rng.uniform(0, 1, size=(200, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + rng.normal(scale=0.1, size=200)
        tree = tree_fit(X, y, max_depth=4, min_leaf=7)
        assert tree.depth <= 4
        assert all(leaf.n_samples >= 7 for leaf in leaves(tree.root))

        predictions = tree.predict(X)
        for value in np.unique(predictions):
            assert y[predictions == value].mean() == pytest.approx(value)

    def test_no_split_below_twice_min_leaf(self):
        X = np.arange(9.0).reshape(-1, 1)
        assert best_split(X, X[:, 0], min_leaf=5) is None

    def test_ties_prefer_lowest_feature(self):
        X = np.column_stack([np.arange(10.0), np.arange(10.0)])
        feature, threshold, _ = best_split(X, (X[:, 0] > 4).astype(float), min_leaf=1)
        assert (feature, threshold) == (0, 4.5)


def route(node: TreeNode, x: np.ndarray) -> float:
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


class TestTreeLearner:
    def test_dict_round_trip(self):
        rng = np.random.default_rng(2)
        X = rng.uniform(size=(50, 2))
        learner = TreeLearner(max_depth=3, min_leaf=2).fit(X, X[:, 0] - X[:, 1])
        root = TreeNode.from_dict(learner.tree.root.to_dict())
        assert [route(root, x) for x in X] == learner.predict(X).tolist()

    def test_clone(self):
        copy = TreeLearner(max_depth=2, min_leaf=3).clone()
        assert (copy.max_depth, copy.min_leaf, copy.is_fitted) == (2, 3, False)
