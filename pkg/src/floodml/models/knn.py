from __future__ import annotations

import numpy as np

from .base import Classifier, NotFittedError, check_features, check_xy


def euclidean_distance(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


class KNearestNeighbors(Classifier):
    """Majority vote over the k nearest training rows.

    Equal distances are ordered by training-row index. A tied vote goes to the
    class whose neighbours have the smaller summed distance, then to class 0.
    ``score`` is the fraction of the k neighbours labelled 1.
    """

    kind = "knn"

    def __init__(self, k=5):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k
        self.X_ = None
        self.y_ = None

    def get_params(self):
        return {"k": self.k}

    def fit(self, X, y):
        X, y = check_xy(X, y)
        if self.k > len(X):
            raise ValueError(f"k={self.k} exceeds training size {len(X)}")
        self.X_, self.y_ = X, y
        return self

    def _neighbors(self, x):
        d = np.sqrt(((self.X_ - x) ** 2).sum(axis=1))
        idx = np.argsort(d, kind="stable")[: self.k]
        return idx, d[idx]

    def _vote(self, x):
        idx, d = self._neighbors(x)
        labels = self.y_[idx]
        ones = int(labels.sum())
        zeros = self.k - ones
        if ones != zeros:
            cls = int(ones > zeros)
        else:
            d1, d0 = d[labels == 1].sum(), d[labels == 0].sum()
            cls = 1 if d1 < d0 else 0
        return cls, ones / self.k

    def predict_with_score(self, X):
        if self.X_ is None:
            raise NotFittedError("KNearestNeighbors is not fitted")
        X = check_features(X, self.X_.shape[1])
        votes = [self._vote(x) for x in X]
        return (np.array([c for c, _ in votes], dtype=int),
                np.array([s for _, s in votes], dtype=float))

    def predict(self, X):
        return self.predict_with_score(X)[0]

    def score(self, X):
        return self.predict_with_score(X)[1]

    def _state(self):
        return {"X": self.X_.tolist(), "y": self.y_.tolist()}

    @classmethod
    def _from_state(cls, params, state):
        m = cls(**params)
        m.X_ = np.array(state["X"], dtype=float)
        m.y_ = np.array(state["y"], dtype=int)
        return m
