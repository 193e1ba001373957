"""Shared classifier plumbing: labeled corpora, evaluation, checkpoints.

All five classifiers expose ``fit(X, y)`` / ``predict(X)`` /
``predict_proba(X)`` and declare through ``input_kind`` whether they consume
the dense feature vectors ("features") or the one-hot matrices ("onehot").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from peernudge.encoding import EncodedText, TextEncoder
from peernudge.errors import CheckpointError, CorpusTooSmallError

CHECKPOINT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LabeledExample:
    """One encoded post with its binary label (1 = pro-tobacco)."""

    encoded: EncodedText
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")

    @property
    def label_pm(self) -> int:
        """Label mapped to {-1, +1} via 2y - 1, as the SVM expects."""
        return 2 * self.label - 1


def load_corpus_jsonl(path: str | Path, encoder: TextEncoder) -> list[LabeledExample]:
    """Read a JSON-lines corpus of {"id", "text", "label"} records."""
    examples = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        examples.append(LabeledExample(encoded=encoder.encode(record["text"]),
                                       label=int(record["label"])))
    return examples


def stack_inputs(examples: list[LabeledExample], input_kind: str):
    """Model inputs X and labels y for a batch of examples."""
    y = np.array([ex.label for ex in examples], dtype=np.int64)
    if input_kind == "onehot":
        X = np.stack([ex.encoded.onehot for ex in examples])
    elif input_kind == "features":
        X = np.stack([ex.encoded.features for ex in examples])
    else:
        raise ValueError(f"unknown input kind {input_kind!r}")
    return X, y


@dataclass(frozen=True)
class EvalReport:
    """Accuracy/recall summary over repeated random train/test splits."""

    mean_accuracy: float
    std_accuracy: float
    mean_recall: float
    n_runs: int

    def __post_init__(self):
        if not (0.0 <= self.mean_accuracy <= 1.0 and 0.0 <= self.mean_recall <= 1.0):
            raise ValueError("mean accuracy/recall must lie in [0, 1]")
        if self.std_accuracy < 0.0:
            raise ValueError("std must be nonnegative")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")


def split_indices(n: int, split: float, seed, run: int):
    """Deterministic shuffled train/test index split for one run."""
    rng = np.random.default_rng((seed, run))
    order = rng.permutation(n)
    n_train = min(max(int(split * n), 1), n - 1)
    return order[:n_train], order[n_train:]


def evaluate(model_factory, examples: list[LabeledExample], n_runs: int = 10,
             split: float = 0.7, seed: int = 0) -> EvalReport:
    """Train/test the model over ``n_runs`` seeded random splits.

    Each run r reseeds from (seed, r); reports are bitwise reproducible for
    a fixed seed.  Recall is for the positive class, 0.0 when the test split
    has no positives.  Std is the population standard deviation.
    """
    if len(examples) < 10:
        raise CorpusTooSmallError(f"need >= 10 examples, got {len(examples)}")
    if not 0.0 < split < 1.0:
        raise ValueError("split must lie strictly between 0 and 1")
    probe = model_factory()
    X, y = stack_inputs(examples, probe.input_kind)
    accuracies = []
    recalls = []
    for run in range(n_runs):
        train_idx, test_idx = split_indices(len(examples), split, seed, run)
        model = model_factory()
        model.fit(X[train_idx], y[train_idx])
        pred = np.asarray(model.predict(X[test_idx]))
        truth = y[test_idx]
        accuracies.append(float(np.mean(pred == truth)))
        positives = truth == 1
        recalls.append(float(np.mean(pred[positives] == 1)) if positives.any() else 0.0)
    return EvalReport(
        mean_accuracy=float(np.mean(accuracies)),
        std_accuracy=float(np.std(accuracies)),
        mean_recall=float(np.mean(recalls)),
        n_runs=n_runs,
    )


def save_checkpoint(model, path: str | Path, encoder: TextEncoder,
                    model_type: str) -> None:
    """Write a versioned JSON checkpoint with the encoder config embedded."""
    payload = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "model_type": model_type,
        "encoder": encoder.config(),
        "params": model.to_params(),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_checkpoint(path: str | Path, alphabet=None):
    """Load a checkpoint; rejects alphabet mismatches and unknown formats.

    Returns (model, model_type, encoder) with the encoder rebuilt from the
    stored config so inputs match the training-time encoding exactly.
    """
    from peernudge.classifiers import MODEL_REGISTRY
    from peernudge.encoding import load_alphabet

    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from exc
    if payload.get("format_version") != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint format {payload.get('format_version')!r}"
        )
    alphabet = alphabet if alphabet is not None else load_alphabet()
    stored = payload.get("encoder", {})
    if stored.get("alphabet_hash") != alphabet.digest():
        raise CheckpointError("checkpoint was built with a different alphabet")
    model_type = payload.get("model_type")
    if model_type not in MODEL_REGISTRY:
        raise CheckpointError(f"unknown model type {model_type!r}")
    model = MODEL_REGISTRY[model_type].from_params(payload["params"])
    encoder = TextEncoder(alphabet, max_len=stored["max_len"],
                          feature_dim=stored["feature_dim"])
    return model, model_type, encoder
