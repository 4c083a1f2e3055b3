from __future__ import annotations

import json

import numpy as np


class NotFittedError(RuntimeError):
    pass


class DegenerateFitError(ValueError):
    """Training data admits no meaningful model (e.g. a single class for SVC)."""


def check_features(X, n_features=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain NaN or infinity")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def check_xy(X, y):
    X = check_features(X)
    y = np.asarray(y)
    if y.ndim != 1 or len(y) != len(X):
        raise ValueError(f"{len(X)} rows but labels have shape {y.shape}")
    if len(X) == 0:
        raise ValueError("empty training set")
    if not np.all(np.isin(y, (0, 1))):
        raise ValueError("labels must be 0 or 1")
    return X, y.astype(int)


class Classifier:
    """Common surface: ``fit``, ``predict`` (0/1) and ``score`` (real, higher = class 1)."""

    kind = None

    def fit(self, X, y):
        raise NotImplementedError

    def predict(self, X):
        raise NotImplementedError

    def score(self, X):
        raise NotImplementedError

    def get_params(self):
        raise NotImplementedError

    def _state(self):
        raise NotImplementedError

    @classmethod
    def _from_state(cls, params, state):
        raise NotImplementedError

    def to_text(self):
        """Self-describing JSON; floats use shortest repr so reload is bit-exact."""
        doc = {"kind": self.kind, "params": self.get_params(), "state": self._state()}
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _registry():
    from .knn import KNearestNeighbors
    from .logistic import LogisticRegression
    from .svc import SupportVectorClassifier
    from .tree import DecisionTree

    return {c.kind: c for c in (LogisticRegression, SupportVectorClassifier,
                                KNearestNeighbors, DecisionTree)}


def load_model(text):
    doc = json.loads(text)
    cls = _registry()[doc["kind"]]
    return cls._from_state(doc["params"], doc["state"])
