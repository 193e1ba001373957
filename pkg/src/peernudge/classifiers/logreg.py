"""Binary logistic regression trained by batch gradient ascent.

The model is h(x) = 1 / (1 + exp(-theta.x)) with the intercept folded into
theta as an extra trailing coordinate.  Training maximizes the dataset
log-likelihood sum(y*z - log(1+e^z)) directly; the per-epoch values are kept
on the fitted model so monotonicity can be checked.
"""

from __future__ import annotations

import numpy as np

from peernudge.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    NonFiniteLossError,
)


def sigmoid(z):
    """Numerically stable logistic function; scalar in, scalar out."""
    arr = np.asarray(z, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    expz = np.exp(arr[~pos])
    out[~pos] = expz / (1.0 + expz)
    if np.isscalar(z) or np.ndim(z) == 0:
        return float(out)
    return out


def _augment(X: np.ndarray) -> np.ndarray:
    return np.hstack([X, np.ones((X.shape[0], 1))])


class LogisticRegression:
    """From-scratch logistic regression on dense feature vectors.

    The gradient is averaged over the batch, so the effective step does not
    grow with dataset size; with bounded features and learning_rate <= 1e-3
    the recorded log-likelihood is non-decreasing every epoch.
    """

    input_kind = "features"

    def __init__(self, learning_rate: float = 0.05, epochs: int = 50):
        if learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.theta = None
        self.loglik_history = None

    def _loglik(self, A: np.ndarray, y: np.ndarray) -> float:
        z = A @ self.theta
        # log Pr(y|x) = y*z - log(1 + e^z), summed over the dataset
        return float(np.sum(y * z - np.logaddexp(0.0, z)))

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegression":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot train on an empty dataset")
        A = _augment(X)
        n = A.shape[0]
        self.theta = np.zeros(A.shape[1])
        history = [self._loglik(A, y)]
        for _ in range(self.epochs):
            probs = sigmoid(A @ self.theta)
            grad = A.T @ (y - probs) / n
            self.theta = self.theta + self.learning_rate * grad
            ll = self._loglik(A, y)
            if not np.isfinite(ll):
                raise NonFiniteLossError("log-likelihood diverged")
            history.append(ll)
        self.loglik_history = history
        return self

    def _check_fitted(self, X: np.ndarray) -> np.ndarray:
        if self.theta is None:
            raise DimensionMismatchError("model is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.theta.shape[0] - 1:
            raise DimensionMismatchError(
                f"expected {self.theta.shape[0] - 1} features, got {X.shape[1]}"
            )
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Probability of the positive class for each row."""
        X = self._check_fitted(X)
        return sigmoid(_augment(X) @ self.theta)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def to_params(self) -> dict:
        return {"theta": self.theta.tolist(),
                "learning_rate": self.learning_rate, "epochs": self.epochs}

    @classmethod
    def from_params(cls, params: dict) -> "LogisticRegression":
        model = cls(learning_rate=params["learning_rate"], epochs=params["epochs"])
        model.theta = np.asarray(params["theta"], dtype=np.float64)
        return model
