"""Greedy binary decision tree grown by information gain over midpoint thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .base import Classifier, NotFittedError, check_features, check_xy

# gains within this of the best are treated as ties
_GAIN_TIE = 1e-12


def entropy(labels):
    """Base-2 Shannon entropy of the empirical class distribution."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("entropy of an empty label set")
    _, counts = np.unique(labels, return_counts=True)
    p = counts / labels.size
    return float(-(p * np.log2(p)).sum()) + 0.0


def information_gain(parent, partitions, weighted=True):
    """Parent entropy minus child entropies.

    With ``weighted=False`` the child entropies are summed unweighted, which can
    reward splits that do nothing; it exists for comparison only.
    """
    parent = np.asarray(parent)
    parts = [np.asarray(p) for p in partitions]
    if sorted(np.concatenate(parts).tolist()) != sorted(parent.tolist()):
        raise ValueError("partitions do not form a partition of the parent labels")
    n = parent.size
    after = 0.0
    for p in parts:
        if p.size == 0:
            continue
        after += (p.size / n if weighted else 1.0) * entropy(p)
    return entropy(parent) - after


def _binary_entropy(n1, n):
    """Entropy for arrays of positive counts ``n1`` out of ``n`` (n > 0)."""
    p = n1 / n
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
    return h


def split_candidates(x, y, weighted=True):
    """All midpoint thresholds on one feature with their gains, thresholds ascending."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(xs)
    cut = np.flatnonzero(xs[:-1] != xs[1:])
    if cut.size == 0:
        return np.empty(0), np.empty(0)
    thr = (xs[cut] + xs[cut + 1]) / 2.0
    # keep the threshold strictly below the right-hand value
    thr = np.where(thr >= xs[cut + 1], xs[cut], thr)
    ones = np.cumsum(ys)
    nl = cut + 1
    nr = n - nl
    l1 = ones[cut]
    r1 = ones[-1] - l1
    hl = _binary_entropy(l1, nl)
    hr = _binary_entropy(r1, nr)
    parent = _binary_entropy(np.array([ones[-1]]), np.array([n]))[0]
    if weighted:
        gain = np.maximum(parent - (nl / n) * hl - (nr / n) * hr, 0.0)
    else:
        gain = parent - hl - hr
    return thr, gain


def best_split(X, y, weighted=True):
    """Best ``(feature, threshold, gain)``; ties go to lower feature, then lower threshold.

    Returns ``None`` when no feature has two distinct values.
    """
    per_feature = [split_candidates(X[:, j], y, weighted) for j in range(X.shape[1])]
    gains = [g for _, g in per_feature if g.size]
    if not gains:
        return None
    top = max(g.max() for g in gains)
    for j, (thr, g) in enumerate(per_feature):
        hit = np.flatnonzero(g >= top - _GAIN_TIE)
        if hit.size:
            k = hit[0]
            return j, float(thr[k]), float(g[k])
    return None


@dataclass
class TreeNode:
    n0: int
    n1: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self):
        return self.feature is None

    @property
    def prediction(self):
        return int(self.n1 > self.n0)

    @property
    def positive_fraction(self):
        return self.n1 / (self.n0 + self.n1)

    def route(self, x):
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def depth(self):
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def leaves(self):
        if self.is_leaf:
            return [self]
        return self.left.leaves() + self.right.leaves()

    def to_dict(self):
        if self.is_leaf:
            return {"n0": self.n0, "n1": self.n1}
        return {"n0": self.n0, "n1": self.n1, "feature": self.feature,
                "threshold": self.threshold,
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, d):
        if "feature" not in d:
            return cls(d["n0"], d["n1"])
        return cls(d["n0"], d["n1"], d["feature"], float(d["threshold"]),
                   cls.from_dict(d["left"]), cls.from_dict(d["right"]))


def grow_tree(X, y, max_depth=8, min_samples=2, min_gain=1e-7, weighted=True, depth=0):
    """Recursive greedy growth. ``max_depth=None`` means unlimited.

    A node becomes a leaf when it is pure, has fewer than ``min_samples`` rows,
    sits at ``max_depth``, or its best gain is below ``min_gain``.
    """
    n1 = int(y.sum())
    node = TreeNode(len(y) - n1, n1)
    if n1 in (0, len(y)) or len(y) < min_samples:
        return node
    if max_depth is not None and depth >= max_depth:
        return node
    split = best_split(X, y, weighted)
    if split is None or split[2] < min_gain:
        return node
    j, thr, _ = split
    mask = X[:, j] <= thr
    node.feature, node.threshold = j, thr
    node.left = grow_tree(X[mask], y[mask], max_depth, min_samples, min_gain, weighted, depth + 1)
    node.right = grow_tree(X[~mask], y[~mask], max_depth, min_samples, min_gain, weighted, depth + 1)
    return node


class DecisionTree(Classifier):
    """``score`` is the positive-class fraction of the leaf a row lands in."""

    kind = "tree"

    def __init__(self, max_depth=8, min_samples=2, min_gain=1e-7, weighted_gain=True):
        self.max_depth = max_depth
        self.min_samples = min_samples
        self.min_gain = min_gain
        self.weighted_gain = weighted_gain
        self.root_ = None
        self.n_features_ = None

    def get_params(self):
        return {"max_depth": self.max_depth, "min_samples": self.min_samples,
                "min_gain": self.min_gain, "weighted_gain": self.weighted_gain}

    def fit(self, X, y):
        X, y = check_xy(X, y)
        self.n_features_ = X.shape[1]
        self.root_ = grow_tree(X, y, self.max_depth, self.min_samples, self.min_gain,
                               self.weighted_gain)
        return self

    def predict_with_score(self, X):
        if self.root_ is None:
            raise NotFittedError("DecisionTree is not fitted")
        X = check_features(X, self.n_features_)
        leaves = [self.root_.route(x) for x in X]
        return (np.array([l.prediction for l in leaves], dtype=int),
                np.array([l.positive_fraction for l in leaves], dtype=float))

    def predict(self, X):
        return self.predict_with_score(X)[0]

    def score(self, X):
        return self.predict_with_score(X)[1]

    def _state(self):
        return {"n_features": self.n_features_, "root": self.root_.to_dict()}

    @classmethod
    def _from_state(cls, params, state):
        m = cls(**params)
        m.n_features_ = state["n_features"]
        m.root_ = TreeNode.from_dict(state["root"])
        return m
