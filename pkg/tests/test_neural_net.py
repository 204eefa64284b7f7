import numpy as np
import pytest

from classifiers.neural_net import (
    NnConfig,
    NnModel,
    init_layers,
    loss_and_gradients,
    nn_loss,
    nn_train,
    parameter_count,
)
from core.exceptions import TrainingError


def _loss(layers, X, y):
    return loss_and_gradients(layers, X, y)[0]


def _check_gradients(layers, X, y, h=1e-5):
    _, grads = loss_and_gradients(layers, X, y)
    for index, (W, b) in enumerate(layers):
        for array, grad in ((W, grads[index][0]), (b, grads[index][1])):
            for pos in np.ndindex(array.shape):
                original = array[pos]
                array[pos] = original + h
                plus = _loss(layers, X, y)
                array[pos] = original - h
                minus = _loss(layers, X, y)
                array[pos] = original
                numeric = (plus - minus) / (2.0 * h)
                analytic = grad[pos]
                assert abs(analytic - numeric) <= 1e-5 * max(abs(analytic), abs(numeric)) + 1e-9


class TestParameters:
    def test_default_parameter_count(self):
        assert parameter_count(9600, NnConfig().hidden_sizes) == 4_801_001

    def test_model_reports_its_size(self):
        layers = init_layers([6, 3, 1], seed=0)
        assert NnModel(tuple(layers)).n_parameters == parameter_count(6, (3,))

    def test_init_range_and_zero_bias(self):
        layers = init_layers([20, 10, 1], seed=5)
        limit = np.sqrt(6.0 / 30.0)
        W, b = layers[0]
        assert np.all(np.abs(W) <= limit)
        assert not b.any()

    def test_hidden_layer_validation(self):
        with pytest.raises(ValueError):
            NnConfig(hidden_sizes=(10, 10, 10))
        with pytest.raises(ValueError):
            NnConfig(hidden_sizes=(0,))


class TestGradients:
    def test_reference_instance(self, rng):
        X = rng.normal(size=(4, 6))
        y = np.array([1.0, -1.0, 1.0, -1.0])
        _check_gradients(init_layers([6, 3, 1], seed=1), X, y)

    def test_random_configurations(self, rng):
        for k in range(20):
            n, d = int(rng.integers(2, 6)), int(rng.integers(1, 5))
            hidden = [int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 3)))]
            X = rng.normal(size=(n, d))
            y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            _check_gradients(init_layers([d, *hidden, 1], seed=k), X, y)


class TestNnTrain:
    def test_zero_epochs_equals_initialization(self, rng):
        X = rng.normal(size=(8, 5))
        y = np.where(np.arange(8) % 2 == 0, 1.0, -1.0)
        cfg = NnConfig(hidden_sizes=(4,), epochs=0, seed=11)
        model = nn_train(X, y, cfg)
        for (W, b), (W0, b0) in zip(model.layers, init_layers([5, 4, 1], 11)):
            assert np.array_equal(W, W0) and np.array_equal(b, b0)

    def test_training_reduces_loss(self, rng):
        y = np.where(np.arange(40) < 20, 1.0, -1.0)
        X = rng.normal(size=(40, 8)) + y[:, None]
        before = nn_train(X, y, NnConfig(hidden_sizes=(6,), epochs=0))
        after = nn_train(X, y, NnConfig(hidden_sizes=(6,), epochs=200, learning_rate=0.5))
        assert nn_loss(after, X, y) < nn_loss(before, X, y)
        assert np.mean(np.sign(after.decision_function(X)) == y) >= 0.85

    def test_deterministic(self, rng):
        y = np.where(np.arange(20) < 10, 1.0, -1.0)
        X = rng.normal(size=(20, 3))
        a = nn_train(X, y, NnConfig(hidden_sizes=(5, 2), epochs=3, seed=2))
        b = nn_train(X, y, NnConfig(hidden_sizes=(5, 2), epochs=3, seed=2))
        for (Wa, ba), (Wb, bb) in zip(a.layers, b.layers):
            assert np.array_equal(Wa, Wb) and np.array_equal(ba, bb)

    def test_non_finite_loss_aborts(self, monkeypatch):
        monkeypatch.setattr("classifiers.neural_net.bce_from_logits", lambda logits, targets: float("nan"))
        y = np.array([1.0, -1.0, 1.0, -1.0])
        X = np.eye(4)
        with pytest.raises(TrainingError, match="non-finite loss at epoch 0"):
            nn_train(X, y, NnConfig(hidden_sizes=(2,), epochs=2))

    def test_single_class_rejected(self):
        with pytest.raises(TrainingError):
            nn_train(np.ones((3, 2)), np.ones(3))
