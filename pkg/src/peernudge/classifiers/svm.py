"""Soft-margin linear SVM trained by sub-gradient descent.

Minimizes  (1/n) * sum_i max(0, 1 - y_i(w.x_i - b)) + lam * ||w||^2  with
labels mapped from {0,1} to {-1,+1}.  The per-epoch objective values are
kept on the fitted model; at zero initialization the objective is exactly
1.0 for any dataset.
"""

from __future__ import annotations

import numpy as np

from peernudge.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    NonFiniteLossError,
)


class LinearSvm:
    input_kind = "features"

    def __init__(self, lam: float = 0.01, learning_rate: float = 0.05,
                 epochs: int = 50):
        if lam <= 0:
            raise ValueError("lam must be positive")
        if learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        self.lam = lam
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.w = None
        self.b = 0.0
        self.objective_history = None

    def objective(self, X: np.ndarray, y_pm: np.ndarray) -> float:
        """Mean hinge loss plus lam*||w||^2 at the current parameters."""
        margins = y_pm * (X @ self.w - self.b)
        hinge = np.maximum(0.0, 1.0 - margins)
        return float(hinge.mean() + self.lam * float(self.w @ self.w))

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearSvm":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y).ravel()
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot train on an empty dataset")
        y_pm = 2.0 * (y > 0).astype(np.float64) - 1.0
        n = X.shape[0]
        self.w = np.zeros(X.shape[1])
        self.b = 0.0
        history = [self.objective(X, y_pm)]
        for _ in range(self.epochs):
            margins = y_pm * (X @ self.w - self.b)
            viol = margins < 1.0
            grad_w = 2.0 * self.lam * self.w
            grad_b = 0.0
            if np.any(viol):
                grad_w = grad_w - (X[viol].T @ y_pm[viol]) / n
                grad_b = float(np.sum(y_pm[viol])) / n
            self.w = self.w - self.learning_rate * grad_w
            self.b = self.b - self.learning_rate * grad_b
            obj = self.objective(X, y_pm)
            if not np.isfinite(obj):
                raise NonFiniteLossError("SVM objective diverged")
            history.append(obj)
        self.objective_history = history
        return self

    def _check(self, X: np.ndarray) -> np.ndarray:
        if self.w is None:
            raise DimensionMismatchError("model is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.w.shape[0]:
            raise DimensionMismatchError(
                f"expected {self.w.shape[0]} features, got {X.shape[1]}"
            )
        return X

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Signed margin w.x - b for each row."""
        return self._check(X) @ self.w - self.b

    def predict_pm(self, X: np.ndarray) -> np.ndarray:
        """Class in {-1,+1}; points exactly on the hyperplane map to +1."""
        return np.where(self.decision_function(X) >= 0.0, 1.0, -1.0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_pm(X) > 0).astype(np.int64)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Margin squashed through a logistic link; for pipeline confidences."""
        d = self.decision_function(X)
        return 1.0 / (1.0 + np.exp(-np.clip(d, -500, 500)))

    def to_params(self) -> dict:
        return {"w": self.w.tolist(), "b": self.b, "lam": self.lam,
                "learning_rate": self.learning_rate, "epochs": self.epochs}

    @classmethod
    def from_params(cls, params: dict) -> "LinearSvm":
        model = cls(lam=params["lam"], learning_rate=params["learning_rate"],
                    epochs=params["epochs"])
        model.w = np.asarray(params["w"], dtype=np.float64)
        model.b = float(params["b"])
        return model
