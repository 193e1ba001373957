"""One-hidden-layer perceptron trained with hand-written backpropagation.

Hidden activation is ReLU, the output is a sigmoid read through a logit, and
the loss is binary cross-entropy computed in logit space
(mean(softplus(z) - y*z)) so gradients stay exact for finite-difference
checking.  All weights start from a seeded uniform(-0.1, 0.1) draw.
"""

from __future__ import annotations

import numpy as np

from peernudge.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    NonFiniteLossError,
)


def relu(z):
    """Elementwise max(0, z)."""
    return np.maximum(np.asarray(z, dtype=np.float64), 0.0)


class Mlp:
    input_kind = "features"

    def __init__(self, hidden: int = 16, learning_rate: float = 0.05,
                 epochs: int = 50, seed: int = 0):
        if hidden < 1:
            raise ValueError("hidden must be >= 1")
        self.hidden = hidden
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.W1 = None
        self.b1 = None
        self.W2 = None
        self.b2 = None
        self.loss_history = None

    def _init_params(self, n_features: int):
        rng = np.random.default_rng(self.seed)
        self.W1 = rng.uniform(-0.1, 0.1, size=(self.hidden, n_features))
        self.b1 = rng.uniform(-0.1, 0.1, size=self.hidden)
        self.W2 = rng.uniform(-0.1, 0.1, size=(1, self.hidden))
        self.b2 = rng.uniform(-0.1, 0.1)

    def _forward(self, X: np.ndarray):
        Z1 = X @ self.W1.T + self.b1
        A1 = relu(Z1)
        z2 = (A1 @ self.W2.T).ravel() + self.b2
        return Z1, A1, z2

    def loss(self, X: np.ndarray, y: np.ndarray) -> float:
        """Mean cross-entropy at the current parameters."""
        _, _, z2 = self._forward(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64).ravel()
        return float(np.mean(np.logaddexp(0.0, z2) - y * z2))

    def grads(self, X: np.ndarray, y: np.ndarray) -> dict:
        """Analytic gradients of the loss w.r.t. every parameter tensor."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        n = X.shape[0]
        Z1, A1, z2 = self._forward(X)
        prob = 1.0 / (1.0 + np.exp(-np.clip(z2, -500, 500)))
        dz2 = (prob - y) / n
        dW2 = (dz2[None, :] @ A1)
        db2 = float(dz2.sum())
        dA1 = np.outer(dz2, self.W2.ravel())
        dZ1 = dA1 * (Z1 > 0)
        dW1 = dZ1.T @ X
        db1 = dZ1.sum(axis=0)
        return {"W1": dW1, "b1": db1, "W2": dW2, "b2": db2}

    def fit(self, X: np.ndarray, y: np.ndarray) -> "Mlp":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot train on an empty dataset")
        self._init_params(X.shape[1])
        history = [self.loss(X, y)]
        for _ in range(self.epochs):
            g = self.grads(X, y)
            self.W1 -= self.learning_rate * g["W1"]
            self.b1 -= self.learning_rate * g["b1"]
            self.W2 -= self.learning_rate * g["W2"]
            self.b2 -= self.learning_rate * g["b2"]
            value = self.loss(X, y)
            if not np.isfinite(value):
                raise NonFiniteLossError("MLP loss diverged")
            history.append(value)
        self.loss_history = history
        return self

    def _check(self, X: np.ndarray) -> np.ndarray:
        if self.W1 is None:
            raise DimensionMismatchError("model is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.W1.shape[1]:
            raise DimensionMismatchError(
                f"expected {self.W1.shape[1]} features, got {X.shape[1]}"
            )
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = self._check(X)
        _, _, z2 = self._forward(X)
        return 1.0 / (1.0 + np.exp(-np.clip(z2, -500, 500)))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def to_params(self) -> dict:
        return {
            "hidden": self.hidden, "learning_rate": self.learning_rate,
            "epochs": self.epochs, "seed": self.seed,
            "W1": self.W1.tolist(), "b1": self.b1.tolist(),
            "W2": self.W2.tolist(), "b2": self.b2,
        }

    @classmethod
    def from_params(cls, params: dict) -> "Mlp":
        model = cls(hidden=params["hidden"], learning_rate=params["learning_rate"],
                    epochs=params["epochs"], seed=params["seed"])
        model.W1 = np.asarray(params["W1"], dtype=np.float64)
        model.b1 = np.asarray(params["b1"], dtype=np.float64)
        model.W2 = np.asarray(params["W2"], dtype=np.float64)
        model.b2 = float(params["b2"])
        return model
