import numpy as np
import pytest

from peernudge.classifiers import Mlp, relu
from peernudge.errors import DimensionMismatchError, EmptyDatasetError


def finite_difference_grads(model, X, y, eps=1e-5):
    """Independent central-difference gradient oracle over every parameter."""
    out = {}
    for name in ("W1", "b1", "W2", "b2"):
        param = getattr(model, name)
        if np.isscalar(param):
            setattr(model, name, param + eps)
            plus = model.loss(X, y)
            setattr(model, name, param - eps)
            minus = model.loss(X, y)
            setattr(model, name, param)
            out[name] = (plus - minus) / (2 * eps)
            continue
        grad = np.zeros_like(param)
        it = np.nditer(param, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = param[idx]
            param[idx] = orig + eps
            plus = model.loss(X, y)
            param[idx] = orig - eps
            minus = model.loss(X, y)
            param[idx] = orig
            grad[idx] = (plus - minus) / (2 * eps)
        out[name] = grad
    return out


def max_relative_error(analytic, numeric):
    worst = 0.0
    for name, num in numeric.items():
        ana = analytic[name]
        num = np.asarray(num, dtype=np.float64)
        ana = np.asarray(ana, dtype=np.float64)
        rel = np.abs(num - ana) / np.maximum(np.abs(num) + np.abs(ana), 1e-8)
        worst = max(worst, float(rel.max()))
    return worst


class TestRelu:
    def test_values(self):
        assert relu(-1.0) == 0.0
        assert relu(0.0) == 0.0
        assert relu(3.5) == 3.5

    def test_elementwise(self):
        assert np.array_equal(relu(np.array([-2.0, 0.0, 2.0])),
                              np.array([0.0, 0.0, 2.0]))


class TestTraining:
    def test_xor(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1, 1, 0])
        model = Mlp(hidden=4, learning_rate=0.5, epochs=5000, seed=0).fit(X, y)
        assert np.array_equal(model.predict(X), y)

    def test_gradient_check(self, rng):
        model = Mlp(hidden=5, seed=11)
        model._init_params(4)
        X = rng.normal(size=(7, 4))
        y = rng.integers(0, 2, size=7)
        numeric = finite_difference_grads(model, X, y)
        analytic = model.grads(X, y)
        assert max_relative_error(analytic, numeric) <= 1e-4

    def test_zero_input_depends_only_on_biases(self):
        model = Mlp(hidden=3, seed=2)
        model._init_params(4)
        x = np.zeros((1, 4))
        expected_logit = float(
            np.maximum(model.b1, 0.0) @ model.W2.ravel() + model.b2
        )
        prob = model.predict_proba(x)[0]
        assert prob == pytest.approx(1.0 / (1.0 + np.exp(-expected_logit)))

    def test_empty_dataset(self):
        with pytest.raises(EmptyDatasetError):
            Mlp().fit(np.zeros((0, 2)), np.zeros(0))

    def test_rejects_bad_hidden(self):
        with pytest.raises(ValueError):
            Mlp(hidden=0)

    def test_seeded_init_reproducible(self):
        a = Mlp(hidden=4, seed=9)
        b = Mlp(hidden=4, seed=9)
        a._init_params(3)
        b._init_params(3)
        assert np.array_equal(a.W1, b.W1)
        assert np.array_equal(a.b1, b.b1)
        assert np.array_equal(a.W2, b.W2)
        assert a.b2 == b.b2

    def test_finite_after_training(self, rng):
        X = rng.uniform(-1, 1, size=(30, 4))
        y = rng.integers(0, 2, size=30)
        model = Mlp(hidden=6, learning_rate=0.3, epochs=150, seed=0).fit(X, y)
        for param in (model.W1, model.b1, model.W2):
            assert np.all(np.isfinite(param))
        assert np.isfinite(model.b2)


class TestPrediction:
    def test_dimension_mismatch(self):
        model = Mlp(hidden=3, seed=0)
        model._init_params(4)
        with pytest.raises(DimensionMismatchError):
            model.predict_proba(np.zeros((1, 5)))

    def test_predict_matches_threshold(self, rng):
        model = Mlp(hidden=3, seed=0)
        model._init_params(4)
        X = rng.normal(size=(12, 4))
        probs = model.predict_proba(X)
        assert np.array_equal(model.predict(X), (probs >= 0.5).astype(int))

    def test_params_roundtrip(self, rng):
        model = Mlp(hidden=4, learning_rate=0.5, epochs=50, seed=1)
        X = rng.normal(size=(15, 3))
        y = rng.integers(0, 2, size=15)
        model.fit(X, y)
        clone = Mlp.from_params(model.to_params())
        assert np.allclose(model.predict_proba(X), clone.predict_proba(X))
