"""Soft-margin linear SVM trained by dual coordinate ascent on the hinge loss.

The dual is solved two coordinates at a time (SMO with maximal violating
pair selection), which keeps the equality constraint ``sum(alpha * y) = 0``
and therefore an unregularized bias. Each step is an exact line search, so
the dual objective never decreases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SVMParams:
    C: float = 1.0
    max_epochs: int = 1000
    tolerance: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0 or self.tolerance <= 0 or self.max_epochs < 1:
            raise ValueError("C and tolerance must be positive, max_epochs at least 1")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    params: SVMParams
    epochs: int = 0
    #: dual objective at the start of each epoch and at termination
    dual_history: list[float] = field(default_factory=list)

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) > 0, 1, -1)

    def accuracy(self, X, y) -> float:
        return float(np.mean(self.predict(X) == np.asarray(y)))

    def hinge_objective(self, X, y) -> float:
        """Primal objective ``0.5 * ||w||^2 + C * sum(hinge)``."""
        margins = np.asarray(y) * self.decision_function(X)
        return float(0.5 * self.weights @ self.weights
                     + self.params.C * np.maximum(0.0, 1.0 - margins).sum())


def _bias(alpha, y, score, up, low, C):
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(score[free].mean())
    return float((score[up].max() + score[low].min()) / 2)


def train_svm(X, y, params: SVMParams = SVMParams()) -> LinearModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one target per row")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    if not set(np.unique(y)) <= {-1, 1}:
        raise ValueError("targets must be +1 or -1")
    if not (np.any(y == 1) and np.any(y == -1)):
        raise ValueError("training data must contain both classes")

    n = len(X)
    yf = y.astype(np.float64)
    C = params.C
    # the seed only fixes tie-breaking between equally violating rows
    order = np.random.default_rng(params.seed).permutation(n)
    Xo, yo = X[order], yf[order]
    alpha = np.zeros(n)
    w = np.zeros(X.shape[1])
    history = []
    epoch = 0
    up = low = None
    score = None
    for epoch in range(1, params.max_epochs + 1):
        history.append(float(alpha.sum() - 0.5 * w @ w))
        converged = False
        for _ in range(n):
            grad = yo * (Xo @ w) - 1.0
            score = -yo * grad
            up = ((yo > 0) & (alpha < C)) | ((yo < 0) & (alpha > 0))
            low = ((yo < 0) & (alpha < C)) | ((yo > 0) & (alpha > 0))
            i = int(np.argmax(np.where(up, score, -np.inf)))
            j = int(np.argmin(np.where(low, score, np.inf)))
            gap = score[i] - score[j]
            if gap <= params.tolerance:
                converged = True
                break
            diff = Xo[i] - Xo[j]
            curvature = max(diff @ diff, 1e-12)
            t_max = min(C - alpha[i] if yo[i] > 0 else alpha[i],
                        alpha[j] if yo[j] > 0 else C - alpha[j])
            t = min(gap / curvature, t_max)
            alpha[i] += yo[i] * t
            alpha[j] -= yo[j] * t
            w += t * diff
        if converged:
            break
    history.append(float(alpha.sum() - 0.5 * w @ w))
    grad = yo * (Xo @ w) - 1.0
    score = -yo * grad
    up = ((yo > 0) & (alpha < C)) | ((yo < 0) & (alpha > 0))
    low = ((yo < 0) & (alpha < C)) | ((yo > 0) & (alpha > 0))
    return LinearModel(w, _bias(alpha, yo, score, up, low, C), params, epoch, history)
