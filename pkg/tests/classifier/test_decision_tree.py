"""Tests for Gini split selection and tree induction."""

import unittest
from unittest import mock

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from leak_analytics.classifier import (
    ILLEGAL,
    LEGAL,
    DecisionTreeModel,
    TreeNode,
    best_feature,
    gini,
    split_scores,
)
from leak_analytics.classifier import decision_tree
from leak_analytics.errors import ClassifierError


def naive_split_score(X, y, feature):
    score = 0.0
    for side in (0, 1):
        rows = y[X[:, feature] == side]
        counts = (int(np.sum(rows == LEGAL)), int(np.sum(rows == ILLEGAL)))
        score += len(rows) / len(y) * gini(counts)
    return score


@st.composite
def binary_problems(draw):
    n_rows = draw(st.integers(min_value=2, max_value=12))
    n_features = draw(st.integers(min_value=1, max_value=5))
    cells = draw(st.lists(st.integers(0, 1), min_size=n_rows * n_features, max_size=n_rows * n_features))
    labels = draw(st.lists(st.integers(0, 1), min_size=n_rows, max_size=n_rows))
    return np.array(cells, dtype=np.uint8).reshape(n_rows, n_features), np.array(labels)


class TestGini(unittest.TestCase):
    """Test cases for impurity and split scores."""

    def test_gini_values(self):
        """Test impurity of pure, balanced and skewed nodes."""
        self.assertEqual(gini((4, 0)), 0.0)
        self.assertAlmostEqual(gini((2, 2)), 0.5)
        self.assertAlmostEqual(gini((3, 1)), 0.375)
        self.assertEqual(gini((0, 0)), 0.0)

    def test_perfect_split_scores_zero(self):
        """Test that a separating feature scores zero."""
        X = np.array([[1, 0], [1, 1], [0, 0], [0, 1]])
        y = np.array([1, 1, 0, 0])
        scores = split_scores(X, y)
        self.assertAlmostEqual(scores[0], 0.0)
        self.assertAlmostEqual(scores[1], 0.5)

    def test_min_leaf_blocks_split(self):
        """Test that a split leaving a tiny child scores inf."""
        X = np.array([[1], [0], [0], [0]])
        y = np.array([1, 0, 0, 0])
        self.assertEqual(split_scores(X, y, min_leaf=2)[0], np.inf)

    @given(binary_problems())
    @settings(max_examples=100, deadline=None)
    def test_matches_naive_computation(self, problem):
        """Test vectorised scores against a per-feature loop."""
        X, y = problem
        scores = split_scores(X, y, min_leaf=1)
        for feature in range(X.shape[1]):
            column = X[:, feature]
            if column.min() == column.max():
                self.assertEqual(scores[feature], np.inf)
            else:
                self.assertAlmostEqual(scores[feature], naive_split_score(X, y, feature))


class TestDecisionTree(unittest.TestCase):
    """Test cases for DecisionTreeModel."""

    def setUp(self):
        """Set up a small separable problem."""
        # Features: GetAd, forecast, com
        self.X = np.array([[1, 0, 1], [1, 0, 1], [0, 1, 0], [0, 1, 1]], dtype=np.uint8)
        self.y = np.array([ILLEGAL, ILLEGAL, LEGAL, LEGAL])

    def test_depth_one_split(self):
        """Test that one token separates the classes at the root."""
        tree = DecisionTreeModel(max_depth=12, min_leaf=1).fit(self.X, self.y)
        self.assertEqual(tree.depth, 1)
        self.assertEqual(tree.root.feature, 0)
        self.assertEqual(tree.n_leaves, 2)
        np.testing.assert_array_equal(tree.predict(self.X), self.y)
        self.assertEqual(tree.root.present.counts, (0, 2))

    def test_ties_prefer_lowest_feature(self):
        """Test that equally good features resolve to the first."""
        X = np.array([[1, 1], [0, 0]])
        tree = DecisionTreeModel(min_leaf=1).fit(X, np.array([1, 0]))
        self.assertEqual(tree.root.feature, 0)

    def test_near_equal_scores_tie(self):
        """Test that scores differing only in the last bits resolve to the first feature."""
        self.assertEqual(best_feature(np.array([0.1 + 0.2, 0.3, 0.4])), 0)
        self.assertEqual(best_feature(np.array([0.4, 0.3, 0.1 + 0.2])), 1)
        self.assertEqual(best_feature(np.array([0.5, 0.2, 0.3])), 1)
        self.assertEqual(best_feature(np.array([np.inf, np.inf])), 0)

    def test_tree_uses_tolerant_tie_break(self):
        """Test that the root split takes the first of two nearly equal features."""
        X = np.array([[1, 1], [1, 1], [0, 0], [0, 0]])
        y = np.array([1, 1, 0, 0])
        with mock.patch.object(
            decision_tree, "split_scores", return_value=np.array([0.1 + 0.2, 0.3])
        ):
            tree = DecisionTreeModel(min_leaf=1).fit(X, y)
        self.assertEqual(tree.root.feature, 0)

    def test_leaf_tie_goes_to_illegal(self):
        """Test that an unsplittable even node predicts illegal."""
        X = np.array([[1], [1]])
        tree = DecisionTreeModel(min_leaf=1).fit(X, np.array([0, 1]))
        self.assertTrue(tree.root.is_leaf)
        self.assertEqual(tree.predict(np.array([1]))[0], ILLEGAL)

    def test_max_depth(self):
        """Test the depth cap."""
        rng = np.random.default_rng(0)
        X = rng.integers(0, 2, size=(60, 8))
        y = rng.integers(0, 2, size=60)
        tree = DecisionTreeModel(max_depth=2, min_leaf=1).fit(X, y)
        self.assertLessEqual(tree.depth, 2)

    def test_min_leaf(self):
        """Test that every leaf holds at least min_leaf training rows."""
        rng = np.random.default_rng(1)
        X = rng.integers(0, 2, size=(80, 6))
        y = rng.integers(0, 2, size=80)
        tree = DecisionTreeModel(min_leaf=5).fit(X, y)
        stack = [tree.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                self.assertGreaterEqual(sum(node.counts), 5)
            else:
                stack.extend((node.absent, node.present))

    def test_internal_nodes_preorder(self):
        """Test pre-order iteration over internal nodes."""
        tree = DecisionTreeModel(min_leaf=1).fit(self.X, self.y)
        self.assertEqual([node.feature for node in tree.internal_nodes()], [0])

    def test_errors(self):
        """Test invalid inputs."""
        with self.assertRaises(ClassifierError):
            DecisionTreeModel(max_depth=0)
        with self.assertRaises(ClassifierError):
            DecisionTreeModel().fit(self.X, np.array([1, 1, 1, 1]))
        with self.assertRaises(ClassifierError):
            DecisionTreeModel().fit(self.X, np.array([1, 0]))
        with self.assertRaises(ClassifierError):
            DecisionTreeModel().predict(self.X)
        tree = DecisionTreeModel(min_leaf=1).fit(self.X, self.y)
        with self.assertRaises(ClassifierError):
            tree.predict(np.array([[1, 0]]))

    def test_dict_form(self):
        """Test that the serialised tree predicts the same."""
        tree = DecisionTreeModel(min_leaf=1).fit(self.X, self.y)
        restored = DecisionTreeModel.from_dict(tree.to_dict())
        np.testing.assert_array_equal(restored.predict(self.X), tree.predict(self.X))
        self.assertEqual(TreeNode.from_dict(tree.root.to_dict()), tree.root)


if __name__ == "__main__":
    unittest.main()
