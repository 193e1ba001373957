"""Character-level convolutional network built on a temporal conv primitive.

The temporal convolution follows h(y) = sum_x f(x) * g(y*d - x + c) with the
offset fixed so output position y covers the input window
[y*d, y*d + k - 1]; that makes it a plain valid cross-correlation, which is
the convention used throughout this module.

Network: one-hot (m, L) -> lookup embedding (e, L) -> conv(k=7) + ReLU ->
conv(k=3) + ReLU -> global max-over-time -> dense -> sigmoid.  Trained with
mini-batch gradient descent on logit-space cross-entropy; every random draw
(init and shuffling) comes from the single constructor seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from peernudge.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    InputTooShortError,
    NonFiniteLossError,
)


def _conv_batch(x: np.ndarray, kernels: np.ndarray, stride: int) -> np.ndarray:
    """Valid cross-correlation of a (B, in_ch, L) batch with (out, in_ch, k)."""
    k = kernels.shape[-1]
    if x.shape[-1] < k:
        raise InputTooShortError(
            f"input length {x.shape[-1]} is shorter than kernel width {k}"
        )
    windows = sliding_window_view(x, k, axis=2)[:, :, ::stride, :]
    return np.einsum("oik,bilk->bol", kernels, windows, optimize=True)


def temporal_conv(g, kernels, stride: int = 1) -> np.ndarray:
    """Temporal convolution of one multi-channel sequence.

    ``g`` is (in_ch, L) or a bare (L,) sequence; ``kernels`` is
    (out_ch, in_ch, k) or a bare (k,) kernel.  Output position y sums
    kernel taps against the input window starting at y*stride, summed over
    input channels; output length is floor((L - k) / stride) + 1.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    g = np.asarray(g, dtype=np.float64)
    kernels = np.asarray(kernels, dtype=np.float64)
    squeeze = g.ndim == 1 and kernels.ndim == 1
    if g.ndim == 1:
        g = g[None, :]
    if kernels.ndim == 1:
        kernels = kernels[None, None, :]
    if kernels.shape[1] != g.shape[0]:
        raise DimensionMismatchError(
            f"kernel expects {kernels.shape[1]} channels, input has {g.shape[0]}"
        )
    out = _conv_batch(g[None], kernels, stride)[0]
    return out[0] if squeeze else out


@dataclass
class ConvLayer:
    """Kernel stack for one layer: (out_ch, in_ch, k) weights plus bias."""

    kernels: np.ndarray
    bias: np.ndarray
    stride: int = 1

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.kernels.ndim != 3 or self.kernels.shape[-1] < 1:
            raise ValueError("kernels must be (out_ch, in_ch, k) with k >= 1")

    def apply(self, g: np.ndarray) -> np.ndarray:
        return temporal_conv(g, self.kernels, self.stride) + self.bias[:, None]


def _transpose_conv(grad_out: np.ndarray, kernels: np.ndarray) -> np.ndarray:
    """Gradient w.r.t. the input of a stride-1 _conv_batch."""
    k = kernels.shape[-1]
    padded = np.pad(grad_out, ((0, 0), (0, 0), (k - 1, k - 1)))
    flipped = kernels[:, :, ::-1]
    windows = sliding_window_view(padded, k, axis=2)
    return np.einsum("oij,bouj->biu", flipped, windows, optimize=True)


class CharCnn:
    """Two-conv-layer character CNN over one-hot input."""

    input_kind = "onehot"

    def __init__(self, alphabet_size: int = 68, embed_dim: int = 16,
                 conv1_filters: int = 64, conv1_k: int = 7,
                 conv2_filters: int = 64, conv2_k: int = 3,
                 learning_rate: float = 0.1, epochs: int = 10,
                 batch_size: int = 32, shuffle: bool = True, seed: int = 0):
        self.alphabet_size = alphabet_size
        self.embed_dim = embed_dim
        self.conv1_filters = conv1_filters
        self.conv1_k = conv1_k
        self.conv2_filters = conv2_filters
        self.conv2_k = conv2_k
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.shuffle = shuffle
        self.seed = seed
        self.params = None
        self.loss_history = None

    def init_params(self):
        """Seeded init: fan-in scaled uniform kernels, zero biases."""
        rng = np.random.default_rng(self.seed)

        def uniform(shape, limit):
            return rng.uniform(-limit, limit, size=shape)

        e, f1, f2 = self.embed_dim, self.conv1_filters, self.conv2_filters
        k1, k2 = self.conv1_k, self.conv2_k
        self.params = {
            "E": uniform((self.alphabet_size, e), 0.5),
            "K1": uniform((f1, e, k1), np.sqrt(6.0 / (e * k1))),
            "b1": np.zeros(f1),
            "K2": uniform((f2, f1, k2), np.sqrt(6.0 / (f1 * k2))),
            "b2": np.zeros(f2),
            "w": uniform((f2,), np.sqrt(6.0 / f2)),
            "b": 0.0,
        }

    def conv_layers(self) -> list[ConvLayer]:
        p = self.params
        return [ConvLayer(p["K1"], p["b1"]), ConvLayer(p["K2"], p["b2"])]

    def _forward(self, X: np.ndarray) -> dict:
        p = self.params
        emb = np.einsum("bml,me->bel", X, p["E"], optimize=True)
        Z1 = _conv_batch(emb, p["K1"], 1) + p["b1"][None, :, None]
        A1 = np.maximum(Z1, 0.0)
        Z2 = _conv_batch(A1, p["K2"], 1) + p["b2"][None, :, None]
        A2 = np.maximum(Z2, 0.0)
        argmax = np.argmax(A2, axis=2)
        pooled = np.take_along_axis(A2, argmax[:, :, None], axis=2)[:, :, 0]
        logits = pooled @ p["w"] + p["b"]
        return {"emb": emb, "Z1": Z1, "A1": A1, "Z2": Z2, "A2": A2,
                "argmax": argmax, "pooled": pooled, "logits": logits}

    def loss(self, X: np.ndarray, y: np.ndarray) -> float:
        z = self._forward(np.asarray(X, dtype=np.float64))["logits"]
        y = np.asarray(y, dtype=np.float64).ravel()
        return float(np.mean(np.logaddexp(0.0, z) - y * z))

    def grads(self, X: np.ndarray, y: np.ndarray) -> dict:
        """Analytic gradients for every parameter tensor, for one batch."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        p = self.params
        n = X.shape[0]
        cache = self._forward(X)
        prob = 1.0 / (1.0 + np.exp(-np.clip(cache["logits"], -500, 500)))
        dz = (prob - y) / n

        dw = cache["pooled"].T @ dz
        db = float(dz.sum())

        dpooled = np.outer(dz, p["w"])
        dA2 = np.zeros_like(cache["A2"])
        np.put_along_axis(dA2, cache["argmax"][:, :, None],
                          dpooled[:, :, None], axis=2)
        dZ2 = dA2 * (cache["Z2"] > 0)

        win1 = sliding_window_view(cache["A1"], self.conv2_k, axis=2)
        dK2 = np.einsum("bol,bilk->oik", dZ2, win1, optimize=True)
        db2 = dZ2.sum(axis=(0, 2))
        dA1 = _transpose_conv(dZ2, p["K2"])
        dZ1 = dA1 * (cache["Z1"] > 0)

        win0 = sliding_window_view(cache["emb"], self.conv1_k, axis=2)
        dK1 = np.einsum("bol,bilk->oik", dZ1, win0, optimize=True)
        db1 = dZ1.sum(axis=(0, 2))
        demb = _transpose_conv(dZ1, p["K1"])
        dE = np.einsum("bml,bel->me", X, demb, optimize=True)

        return {"E": dE, "K1": dK1, "b1": db1, "K2": dK2, "b2": db2,
                "w": dw, "b": db}

    def fit(self, X: np.ndarray, y: np.ndarray) -> "CharCnn":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64).ravel()
        if X.shape[0] == 0:
            raise EmptyDatasetError("cannot train on an empty dataset")
        if X.shape[1] != self.alphabet_size:
            raise DimensionMismatchError(
                f"expected alphabet size {self.alphabet_size}, got {X.shape[1]}"
            )
        self.init_params()
        rng = np.random.default_rng((self.seed, 1))
        n = X.shape[0]
        history = [self.loss(X, y)]
        for _ in range(self.epochs):
            order = rng.permutation(n) if self.shuffle else np.arange(n)
            batch_losses = []
            for start in range(0, n, self.batch_size):
                idx = order[start:start + self.batch_size]
                g = self.grads(X[idx], y[idx])
                for name, grad in g.items():
                    self.params[name] = self.params[name] - self.learning_rate * grad
                batch_losses.append(self.loss(X[idx], y[idx]))
            epoch_loss = float(np.mean(batch_losses))
            if not np.isfinite(epoch_loss):
                raise NonFiniteLossError("Char-CNN loss diverged")
            history.append(epoch_loss)
        self.loss_history = history
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.params is None:
            raise DimensionMismatchError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 2
        if single:
            X = X[None]
        if X.shape[1] != self.alphabet_size:
            raise DimensionMismatchError(
                f"expected alphabet size {self.alphabet_size}, got {X.shape[1]}"
            )
        z = self._forward(X)["logits"]
        probs = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
        return float(probs[0]) if single else probs

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (np.atleast_1d(self.predict_proba(X)) >= 0.5).astype(np.int64)

    def to_params(self) -> dict:
        out = {
            "alphabet_size": self.alphabet_size, "embed_dim": self.embed_dim,
            "conv1_filters": self.conv1_filters, "conv1_k": self.conv1_k,
            "conv2_filters": self.conv2_filters, "conv2_k": self.conv2_k,
            "learning_rate": self.learning_rate, "epochs": self.epochs,
            "batch_size": self.batch_size, "shuffle": self.shuffle,
            "seed": self.seed,
        }
        out["weights"] = {
            name: (value.tolist() if isinstance(value, np.ndarray) else value)
            for name, value in self.params.items()
        }
        return out

    @classmethod
    def from_params(cls, params: dict) -> "CharCnn":
        kwargs = {k: v for k, v in params.items() if k != "weights"}
        model = cls(**kwargs)
        model.params = {
            name: (np.asarray(value, dtype=np.float64)
                   if isinstance(value, list) else value)
            for name, value in params["weights"].items()
        }
        return model
