"""
Random Forest Classifier

CART trees with Gini impurity grown on bootstrap resamples, with the
hyperparameter defaults of the common reference library. Every tree draws its
randomness from its own generator seeded by (seed, tree_index), so a forest is
identical whether its trees are trained serially or on a thread pool.

Tie-breaking is fixed: among equal Gini gains the lowest feature index wins,
then the lowest threshold. Thresholds sit at midpoints between consecutive
distinct sorted values, and samples with x <= threshold go left.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from emgcore.errors import DimensionMismatch, EmptyTrainingSet, InvalidConfig
from emgcore.types import Word
from utils import get_logger

logger = get_logger(__name__)

N_CLASSES = len(Word)
LEAF = -1
# Gains at or below this are rounding noise, not an impurity decrease.
MIN_GAIN = 1e-12


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    max_features: int | None = None
    max_depth: int | None = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise InvalidConfig(f"[forest] n_trees must be >= 1, got {self.n_trees}")
        if self.max_features is not None and self.max_features < 1:
            raise InvalidConfig(f"[forest] max_features must be >= 1, got {self.max_features}")
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidConfig(f"[forest] max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_split < 2:
            raise InvalidConfig("[forest] min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise InvalidConfig("[forest] min_samples_leaf must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidConfig(f"[forest] seed must be an unsigned 64-bit integer, got {self.seed}")

    def resolve_max_features(self, n_features):
        """floor(sqrt(n_features)) unless set explicitly; clipped to [1, n_features]."""
        wanted = self.max_features if self.max_features is not None else math.isqrt(n_features)
        return int(min(max(wanted, 1), n_features))


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """Flat node arrays; leaves have feature == -1 and carry class counts in value."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self):
        return self.feature.size

    def apply(self, X):
        """Leaf node index reached by every row of X."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            current = node[rows]
            go_left = X[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])
            active[rows] = self.feature[node[rows]] != LEAF
        return node

    def predict_proba(self, X):
        counts = self.value[self.apply(X)]
        return counts / counts.sum(axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class ForestModel:
    trees: tuple[DecisionTree, ...]
    params: ForestParams
    n_classes: int
    feature_dim: int


def _gini(counts, totals):
    fractions = counts / totals[:, None]
    return 1.0 - np.einsum("ij,ij->i", fractions, fractions)


def _best_split_on_feature(column, labels, parent_gini, min_leaf):
    """Best (gain, threshold) for one feature, or (-inf, nan) when nothing splits."""
    order = np.argsort(column, kind="stable")
    xs = column[order]
    n = xs.size
    onehot = np.zeros((n, N_CLASSES))
    onehot[np.arange(n), labels[order]] = 1.0
    left_counts = np.cumsum(onehot, axis=0)[:-1]
    right_counts = left_counts[-1] + onehot[-1] - left_counts
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left

    valid = (xs[1:] > xs[:-1]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    if not valid.any():
        return -np.inf, np.nan
    weighted = (n_left * _gini(left_counts, n_left) + n_right * _gini(right_counts, n_right)) / n
    gain = np.where(valid, parent_gini - weighted, -np.inf)
    i = int(np.argmax(gain))
    lo, hi = xs[i], xs[i + 1]
    threshold = (lo + hi) / 2.0
    if threshold >= hi or not np.isfinite(threshold):
        threshold = lo
    return float(gain[i]), float(threshold)


def _grow_tree(X, y, params, tree_index):
    rng = np.random.default_rng([params.seed, tree_index])
    n_samples, n_features = X.shape
    if params.bootstrap:
        root = rng.integers(0, n_samples, size=n_samples)
    else:
        root = np.arange(n_samples)
    k = params.resolve_max_features(n_features)

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(counts):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(counts)
        return len(feature) - 1

    stack = [(root, 0, new_node(np.bincount(y[root], minlength=N_CLASSES).astype(np.float64)))]
    while stack:
        rows, depth, node = stack.pop()
        counts = value[node]
        n = rows.size
        if (np.count_nonzero(counts) <= 1
                or n < params.min_samples_split
                or (params.max_depth is not None and depth >= params.max_depth)):
            continue

        candidates = np.sort(rng.choice(n_features, size=k, replace=False))
        parent_gini = 1.0 - float(np.sum((counts / n) ** 2))
        labels = y[rows]
        best_gain, best_feature, best_threshold = MIN_GAIN, LEAF, 0.0
        for f in candidates:
            gain, thr = _best_split_on_feature(X[rows, f], labels, parent_gini, params.min_samples_leaf)
            # strict ">" keeps the lowest feature index on ties
            if gain > best_gain:
                best_gain, best_feature, best_threshold = gain, int(f), thr
        if best_feature == LEAF:
            continue

        goes_left = X[rows, best_feature] <= best_threshold
        left_rows, right_rows = rows[goes_left], rows[~goes_left]
        feature[node] = best_feature
        threshold[node] = best_threshold
        left_node = new_node(np.bincount(y[left_rows], minlength=N_CLASSES).astype(np.float64))
        right_node = new_node(np.bincount(y[right_rows], minlength=N_CLASSES).astype(np.float64))
        left[node], right[node] = left_node, right_node
        # right pushed first so the left subtree is expanded first
        stack.append((right_rows, depth + 1, right_node))
        stack.append((left_rows, depth + 1, left_node))

    return DecisionTree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.float64).reshape(-1, N_CLASSES),
    )


def _check_training_set(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise DimensionMismatch(f"[forest] feature matrix must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise EmptyTrainingSet("[forest] cannot fit a forest on zero samples")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"[forest] {X.shape[0]} feature rows but labels of shape {y.shape}")
    if y.min() < 0 or y.max() >= N_CLASSES:
        raise DimensionMismatch(f"[forest] labels must lie in [0, {N_CLASSES})")
    if X.shape[1] == 0:
        raise DimensionMismatch("[forest] feature matrix has zero columns")
    return X, y


def fit_forest(X, y, params=None, threads=1):
    """
    Trains a Random Forest.

    Args:
        X: Samples x features matrix
        y: Integer labels (word codes); all classes need not be present
        params: ForestParams (defaults if None)
        threads: Worker threads for tree training; the model does not depend on it

    Returns:
        ForestModel

    Raises:
        EmptyTrainingSet: If X has no rows
        DimensionMismatch: If X and y disagree in length or X is not 2-D
    """
    params = params or ForestParams()
    X, y = _check_training_set(X, y)
    logger.debug(f"Fitting {params.n_trees} tree(s) on {X.shape[0]} x {X.shape[1]} with {threads} thread(s)")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = tuple(pool.map(lambda t: _grow_tree(X, y, params, t), range(params.n_trees)))
    else:
        trees = tuple(_grow_tree(X, y, params, t) for t in range(params.n_trees))
    return ForestModel(trees=trees, params=params, n_classes=N_CLASSES, feature_dim=X.shape[1])


def predict_batch(m, X):
    """
    Predicts a matrix of feature vectors.

    Returns:
        Tuple (labels as int array, probabilities as samples x classes array)

    Raises:
        DimensionMismatch: If the feature dimension differs from training
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != m.feature_dim:
        raise DimensionMismatch(f"[forest] expected {m.feature_dim} features, got shape {X.shape}")
    proba = np.zeros((X.shape[0], m.n_classes))
    for tree in m.trees:
        proba += tree.predict_proba(X)
    proba /= len(m.trees)
    # argmax returns the first maximum, i.e. the lowest class code on ties
    return np.argmax(proba, axis=1), proba


def predict(m, x):
    """
    Predicts one feature vector.

    Args:
        m: ForestModel
        x: FeatureVector or 1-D array

    Returns:
        Tuple (Word, class-probability vector)
    """
    values = getattr(x, "values", x)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise DimensionMismatch(f"[forest] expected a 1-D feature vector, got shape {values.shape}")
    labels, proba = predict_batch(m, values[np.newaxis, :])
    return Word(int(labels[0])), proba[0]
