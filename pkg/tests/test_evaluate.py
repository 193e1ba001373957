import json

import numpy as np
import pytest

from peernudge.classifiers import (
    MODEL_REGISTRY,
    CharCnn,
    DecisionTree,
    LabeledExample,
    LinearSvm,
    LogisticRegression,
    Mlp,
    evaluate,
    load_checkpoint,
    load_corpus_jsonl,
    save_checkpoint,
    split_indices,
    stack_inputs,
)
from peernudge.encoding import Alphabet, TextEncoder
from peernudge.errors import CheckpointError, CorpusTooSmallError


class ConstantModel:
    """Always predicts the positive class."""

    input_kind = "features"

    def fit(self, X, y):
        return self

    def predict(self, X):
        return np.ones(len(X), dtype=int)


class OracleModel:
    """Reads the label straight out of feature 0."""

    input_kind = "features"

    def fit(self, X, y):
        return self

    def predict(self, X):
        return (X[:, 0] > 0.5).astype(int)


class FlippedOracle(OracleModel):
    def predict(self, X):
        return 1 - super().predict(X)


def label_corpus(n=60, seed=0):
    """Balanced corpus whose label is readable from feature 0."""
    rng = np.random.default_rng(seed)
    examples = []
    encoder = TextEncoder(max_len=8, feature_dim=4)
    for i in range(n):
        label = i % 2
        enc = encoder.encode("xx")
        features = rng.normal(size=4)
        features[0] = float(label)
        object.__setattr__(enc, "features", features)
        examples.append(LabeledExample(encoded=enc, label=label))
    return examples


class TestEvaluate:
    def test_constant_model_near_half(self):
        examples = label_corpus(100)
        report = evaluate(ConstantModel, examples, n_runs=10, split=0.7, seed=3)
        assert abs(report.mean_accuracy - 0.5) < 0.15
        assert report.mean_recall == 1.0

    def test_oracle_model_perfect(self):
        examples = label_corpus(60)
        report = evaluate(OracleModel, examples, n_runs=10, split=0.7, seed=3)
        assert report.mean_accuracy == 1.0
        assert report.std_accuracy == 0.0
        assert report.mean_recall == 1.0

    def test_bitwise_reproducible(self):
        examples = label_corpus(60)
        a = evaluate(ConstantModel, examples, n_runs=10, split=0.7, seed=9)
        b = evaluate(ConstantModel, examples, n_runs=10, split=0.7, seed=9)
        assert a == b

    def test_flipped_model_complements_accuracy(self):
        examples = label_corpus(80, seed=5)
        base = evaluate(OracleModel, examples, n_runs=6, split=0.7, seed=4)
        flipped = evaluate(FlippedOracle, examples, n_runs=6, split=0.7, seed=4)
        assert base.mean_accuracy + flipped.mean_accuracy == pytest.approx(1.0)

    def test_corpus_too_small(self):
        with pytest.raises(CorpusTooSmallError):
            evaluate(ConstantModel, label_corpus(9), n_runs=2)

    def test_split_validated(self):
        with pytest.raises(ValueError):
            evaluate(ConstantModel, label_corpus(20), split=1.0)

    def test_split_indices_partition(self):
        train, test = split_indices(50, 0.7, seed=0, run=3)
        assert len(train) == 35 and len(test) == 15
        assert sorted(np.concatenate([train, test])) == list(range(50))


class TestCorpusIo:
    def test_jsonl_roundtrip(self, tmp_path, encoder):
        path = tmp_path / "corpus.jsonl"
        rows = [{"id": "a", "text": "i vape", "label": 1},
                {"id": "b", "text": "hello", "label": 0}]
        path.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
        examples = load_corpus_jsonl(path, encoder)
        assert [e.label for e in examples] == [1, 0]
        assert examples[0].label_pm == 1 and examples[1].label_pm == -1

    def test_stack_inputs_shapes(self, encoder):
        examples = [LabeledExample(encoder.encode("ab"), 1),
                    LabeledExample(encoder.encode("cd"), 0)]
        Xf, y = stack_inputs(examples, "features")
        Xo, _ = stack_inputs(examples, "onehot")
        assert Xf.shape == (2, 64) and Xo.shape == (2, 68, 40)
        assert list(y) == [1, 0]

    def test_label_validated(self, encoder):
        with pytest.raises(ValueError):
            LabeledExample(encoder.encode("ab"), 2)


def fitted_models(encoder):
    rng = np.random.default_rng(0)
    Xf = rng.uniform(-1, 1, size=(24, encoder.feature_dim))
    y = rng.integers(0, 2, size=24)
    texts = ["smoke this now", "sunny day out"] * 12
    Xo = np.stack([encoder.encode(t).onehot for t in texts])
    return {
        "logreg": (LogisticRegression(epochs=10).fit(Xf, y), Xf),
        "dtree": (DecisionTree(max_depth=3).fit(Xf, y), Xf),
        "svm": (LinearSvm(epochs=10).fit(Xf, y), Xf),
        "mlp": (Mlp(hidden=4, epochs=10, seed=0).fit(Xf, y), Xf),
        "charcnn": (CharCnn(embed_dim=4, conv1_filters=6, conv1_k=7,
                            conv2_filters=4, conv2_k=3, epochs=2,
                            batch_size=8, seed=0).fit(Xo, y), Xo),
    }


class TestCheckpoints:
    def test_roundtrip_all_models(self, tmp_path, encoder):
        for name, (model, X) in fitted_models(encoder).items():
            path = tmp_path / f"{name}.ckpt.json"
            save_checkpoint(model, path, encoder, name)
            loaded, model_type, loaded_encoder = load_checkpoint(path)
            assert model_type == name
            assert loaded_encoder.max_len == encoder.max_len
            assert np.allclose(np.atleast_1d(model.predict_proba(X)),
                               np.atleast_1d(loaded.predict_proba(X)))

    def test_rejects_wrong_alphabet(self, tmp_path, encoder):
        model = LogisticRegression(epochs=2).fit(np.ones((4, encoder.feature_dim)),
                                                 np.array([0, 1, 0, 1]))
        path = tmp_path / "m.ckpt.json"
        save_checkpoint(model, path, encoder, "logreg")
        with pytest.raises(CheckpointError):
            load_checkpoint(path, alphabet=Alphabet("abc"))

    def test_rejects_bad_version(self, tmp_path, encoder):
        path = tmp_path / "m.ckpt.json"
        payload = {"format_version": 99, "model_type": "logreg",
                   "encoder": encoder.config(), "params": {}}
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_rejects_unknown_model(self, tmp_path, encoder):
        path = tmp_path / "m.ckpt.json"
        payload = {"format_version": 1, "model_type": "mystery",
                   "encoder": encoder.config(), "params": {}}
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_registry_covers_all_five(self):
        assert set(MODEL_REGISTRY) == {"logreg", "dtree", "svm", "mlp", "charcnn"}
