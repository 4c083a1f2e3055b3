"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import numpy as np

from .base import Classifier, NotFittedError, check_features, check_xy

_P_MIN = np.finfo(float).tiny
_P_MAX = np.nextafter(1.0, 0.0)


def sigmoid(z):
    """1 / (1 + exp(-z)) without overflow, clamped to the open interval (0, 1)."""
    z = np.asarray(z, dtype=float)
    ez = np.exp(-np.abs(z))
    p = np.where(z >= 0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
    return np.clip(p, _P_MIN, _P_MAX)


def log_loss(intercept, weights, X, y, l2=0.0):
    """Mean negative log-likelihood plus ``l2/2 * |weights|^2``."""
    z = intercept + X @ weights
    # log(1 + e^z) - y z, evaluated stably
    nll = np.logaddexp(0.0, z) - y * z
    return float(nll.mean() + 0.5 * l2 * weights @ weights)


def log_loss_gradient(intercept, weights, X, y, l2=0.0):
    """Returns ``(d/d intercept, d/d weights)`` of :func:`log_loss`."""
    resid = sigmoid(intercept + X @ weights) - y
    n = len(y)
    return float(resid.sum() / n), X.T @ resid / n + l2 * weights


class LogisticRegression(Classifier):
    kind = "logistic"

    def __init__(self, learning_rate=0.1, max_iter=5000, tol=1e-6, l2=0.0, threshold=0.5):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.tol = tol
        self.l2 = l2
        self.threshold = threshold
        self.intercept_ = None
        self.coef_ = None
        self.n_iter_ = 0
        self.loss_ = None
        self.loss_history_ = []

    def get_params(self):
        return {"learning_rate": self.learning_rate, "max_iter": self.max_iter,
                "tol": self.tol, "l2": self.l2, "threshold": self.threshold}

    def fit(self, X, y):
        X, y = check_xy(X, y)
        a, w = 0.0, np.zeros(X.shape[1])
        history = [log_loss(a, w, X, y, self.l2)]
        it = 0
        for it in range(1, self.max_iter + 1):
            ga, gw = log_loss_gradient(a, w, X, y, self.l2)
            if max(abs(ga), np.max(np.abs(gw), initial=0.0)) < self.tol:
                it -= 1
                break
            a -= self.learning_rate * ga
            w = w - self.learning_rate * gw
            history.append(log_loss(a, w, X, y, self.l2))
        self.intercept_, self.coef_ = a, w
        self.n_iter_ = it
        self.loss_history_ = history
        self.loss_ = history[-1]
        return self

    def _check(self, X):
        if self.coef_ is None:
            raise NotFittedError("LogisticRegression is not fitted")
        return check_features(X, len(self.coef_))

    def decision_function(self, X):
        """Log-odds ``intercept + X . coef``."""
        X = self._check(X)
        return self.intercept_ + X @ self.coef_

    def predict_proba(self, X):
        """Probability of class 1."""
        return sigmoid(self.decision_function(X))

    def predict(self, X):
        return (self.predict_proba(X) >= self.threshold).astype(int)

    def score(self, X):
        return self.predict_proba(X)

    def _state(self):
        return {"intercept": self.intercept_, "coef": [float(v) for v in self.coef_],
                "n_iter": self.n_iter_, "loss": self.loss_}

    @classmethod
    def _from_state(cls, params, state):
        m = cls(**params)
        m.intercept_ = float(state["intercept"])
        m.coef_ = np.array(state["coef"], dtype=float)
        m.n_iter_ = state["n_iter"]
        m.loss_ = state["loss"]
        return m
