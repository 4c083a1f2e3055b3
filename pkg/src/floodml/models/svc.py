"""Soft-margin kernel SVC solved with sequential minimal optimization.

The dual is solved in the libsvm form

    min  1/2 a'Qa - sum(a)    s.t.  y'a = 0,  0 <= a_i <= C,   Q_ij = y_i y_j K(x_i, x_j)

with labels mapped 0 -> -1, 1 -> +1. Each step picks the maximal violating
pair (i, j) and solves the two-variable subproblem in closed form; the loop
stops once the KKT gap ``m(a) - M(a)`` drops below ``tol``.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, DegenerateFitError, NotFittedError, check_features, check_xy


def kernel_eval(kernel, x, y, gamma=None):
    """Kernel value for two vectors: ``"linear"`` dot product or ``"rbf"`` exp(-gamma |x-y|^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(kernel_matrix(kernel, x[None, :], y[None, :], gamma)[0, 0])


def kernel_matrix(kernel, A, B, gamma=None):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if kernel == "linear":
        return A @ B.T
    if kernel == "rbf":
        if gamma is None or gamma <= 0:
            raise ValueError(f"rbf kernel needs gamma > 0, got {gamma}")
        sq = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
        return np.exp(-gamma * sq)
    raise ValueError(f"unknown kernel {kernel!r}")


class SupportVectorClassifier(Classifier):
    """Kernel SVC. ``score`` is the signed decision value; class 1 iff it is >= 0.

    ``gamma="scale"`` resolves to ``1 / (n_features * X.var())`` at fit time.
    ``max_passes`` caps the work at ``max_passes * n_samples`` pair updates.
    """

    kind = "svc"

    def __init__(self, C=1.0, kernel="rbf", gamma="scale", tol=1e-5, max_passes=100,
                 alpha_cutoff=1e-8):
        if C <= 0:
            raise ValueError("C must be positive")
        if kernel not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel {kernel!r}")
        self.C = C
        self.kernel = kernel
        self.gamma = gamma
        self.tol = tol
        self.max_passes = max_passes
        self.alpha_cutoff = alpha_cutoff
        self.gamma_ = None
        self.support_ = None
        self.support_vectors_ = None
        self.dual_coef_ = None
        self.alpha_ = None
        self.intercept_ = None
        self.n_iter_ = 0
        self.converged_ = False

    def get_params(self):
        return {"C": self.C, "kernel": self.kernel, "gamma": self.gamma, "tol": self.tol,
                "max_passes": self.max_passes, "alpha_cutoff": self.alpha_cutoff}

    def _resolve_gamma(self, X):
        if self.kernel == "linear":
            return None
        if self.gamma == "scale":
            var = X.var()
            return float(1.0 / (X.shape[1] * var)) if var > 0 else 1.0
        return float(self.gamma)

    def fit(self, X, y):
        X, y01 = check_xy(X, y)
        if len(np.unique(y01)) < 2:
            raise DegenerateFitError("SVC needs both classes in the training labels")
        y = np.where(y01 == 1, 1.0, -1.0)
        n = len(y)
        C = float(self.C)
        self.gamma_ = self._resolve_gamma(X)
        K = kernel_matrix(self.kernel, X, X, self.gamma_)

        alpha = np.zeros(n)
        grad = -np.ones(n)  # Q a - 1
        max_iter = self.max_passes * n
        it = 0
        self.converged_ = False
        while it < max_iter:
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
            viol = -y * grad
            m_up = np.where(up, viol, -np.inf)
            m_low = np.where(low, viol, np.inf)
            i = int(np.argmax(m_up))
            j = int(np.argmin(m_low))
            gap = m_up[i] - m_low[j]
            if gap < self.tol:
                self.converged_ = True
                break
            curv = K[i, i] + K[j, j] - 2.0 * K[i, j]
            step = gap / curv if curv > 1e-12 else np.inf
            # a_i += y_i step, a_j -= y_j step keeps y'a fixed
            step = min(step,
                       C - alpha[i] if y[i] > 0 else alpha[i],
                       alpha[j] if y[j] > 0 else C - alpha[j])
            alpha[i] += y[i] * step
            alpha[j] -= y[j] * step
            grad += step * y * (K[:, i] - K[:, j])
            it += 1
        self.n_iter_ = it
        alpha = np.clip(alpha, 0.0, C)

        viol = -y * grad
        free = (alpha > self.alpha_cutoff) & (alpha < C - self.alpha_cutoff)
        if free.any():
            b = float(viol[free].mean())
        else:
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
            hi = viol[up].max() if up.any() else viol[low].min()
            lo = viol[low].min() if low.any() else viol[up].max()
            b = float((hi + lo) / 2.0)

        keep = np.flatnonzero(alpha > self.alpha_cutoff)
        self.alpha_ = alpha
        self.support_ = keep
        self.support_vectors_ = X[keep]
        self.dual_coef_ = y[keep] * alpha[keep]
        self.intercept_ = b
        return self

    def decision_function(self, X):
        """``sum_i y_i a_i K(x_i, x) + b`` over the retained support vectors."""
        if self.intercept_ is None:
            raise NotFittedError("SupportVectorClassifier is not fitted")
        X = check_features(X, self.support_vectors_.shape[1])
        if len(self.dual_coef_) == 0:
            return np.full(len(X), self.intercept_)
        K = kernel_matrix(self.kernel, X, self.support_vectors_, self.gamma_)
        return K @ self.dual_coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) >= 0).astype(int)

    def score(self, X):
        return self.decision_function(X)

    def _state(self):
        return {"gamma": self.gamma_, "intercept": self.intercept_,
                "n_features": int(self.support_vectors_.shape[1]),
                "support": self.support_.tolist(),
                "support_vectors": self.support_vectors_.tolist(),
                "dual_coef": self.dual_coef_.tolist(),
                "n_iter": self.n_iter_}

    @classmethod
    def _from_state(cls, params, state):
        m = cls(**params)
        m.gamma_ = state["gamma"]
        m.intercept_ = float(state["intercept"])
        m.support_ = np.array(state["support"], dtype=int)
        m.support_vectors_ = np.array(state["support_vectors"], dtype=float).reshape(
            -1, state["n_features"])
        m.dual_coef_ = np.array(state["dual_coef"], dtype=float)
        m.n_iter_ = state["n_iter"]
        return m

    @classmethod
    def from_dual(cls, support_vectors, dual_coef, intercept, kernel="linear", gamma=None):
        """Build a model directly from dual parameters."""
        m = cls(kernel=kernel, gamma=gamma if gamma is not None else "scale")
        m.gamma_ = gamma
        m.support_vectors_ = np.atleast_2d(np.asarray(support_vectors, dtype=float))
        m.dual_coef_ = np.asarray(dual_coef, dtype=float)
        m.support_ = np.arange(len(m.dual_coef_))
        m.intercept_ = float(intercept)
        return m
