"""
Fully connected sigmoid network with one logit output, trained by mini-batch gradient descent on binary cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.special import expit

from core.exceptions import TrainingError

from .base import check_training_data

DEFAULT_HIDDEN = (500,)
MULTI_LAYER_HIDDEN = (500, 100)


class NnConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    hidden_sizes: Tuple[int, ...] = DEFAULT_HIDDEN
    learning_rate: float = Field(default=0.1, gt=0)
    epochs: int = Field(default=30, ge=0)
    batch_size: int = Field(default=16, ge=1)
    seed: int = 0

    @field_validator("hidden_sizes")
    @classmethod
    def _check_hidden(cls, value):
        if not 1 <= len(value) <= 2:
            raise ValueError("one or two hidden layers are supported")
        if any(size < 1 for size in value):
            raise ValueError("hidden layer sizes must be positive")
        return tuple(value)


Layers = List[Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class NnModel:
    """Each layer holds W with shape (fan_in, fan_out) and a bias of length fan_out."""
    layers: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    @property
    def n_parameters(self) -> int:
        return sum(W.size + b.size for W, b in self.layers)

    @property
    def sizes(self) -> List[int]:
        return [self.layers[0][0].shape[0]] + [W.shape[1] for W, _ in self.layers]

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Output logit; sigmoid(logit) = 0.5 exactly at score 0"""
        return _forward(self.layers, X)[-1]

    def to_params(self) -> Dict[str, Any]:
        return {"layers": [{"weights": W.tolist(), "bias": b.tolist()} for W, b in self.layers]}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "NnModel":
        return cls(layers=tuple(
            (np.asarray(layer["weights"], dtype=np.float64), np.asarray(layer["bias"], dtype=np.float64))
            for layer in params["layers"]
        ))


def parameter_count(input_dim: int, hidden_sizes: Sequence[int]) -> int:
    sizes = [input_dim, *hidden_sizes, 1]
    return sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))


def init_layers(sizes: Sequence[int], seed: int) -> Layers:
    """Uniform(+-sqrt(6 / (fan_in + fan_out))) weights, zero biases"""
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append((rng.uniform(-limit, limit, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return layers


def _forward(layers, X: np.ndarray) -> List[np.ndarray]:
    """Activations of every layer; the last entry is the (n,) output logit"""
    activations = [X]
    a = X
    for W, b in layers[:-1]:
        a = expit(a @ W + b)
        activations.append(a)
    W, b = layers[-1]
    activations.append((a @ W + b)[:, 0])
    return activations


def bce_from_logits(logits: np.ndarray, targets: np.ndarray) -> float:
    """Mean binary cross-entropy, computed without forming probabilities"""
    return float(np.mean(np.logaddexp(0.0, logits) - targets * logits))


def loss_and_gradients(layers, X: np.ndarray, y: np.ndarray) -> Tuple[float, Layers]:
    """Loss and d(loss)/d(W, b) for every layer, by backpropagation"""
    targets = (np.asarray(y) > 0).astype(np.float64)
    activations = _forward(layers, X)
    logits = activations[-1]
    loss = bce_from_logits(logits, targets)

    delta = ((expit(logits) - targets) / X.shape[0])[:, None]
    grads: Layers = [None] * len(layers)
    for index in range(len(layers) - 1, -1, -1):
        W, _ = layers[index]
        a_prev = activations[index]
        grads[index] = (a_prev.T @ delta, delta.sum(axis=0))
        if index > 0:
            delta = (delta @ W.T) * a_prev * (1.0 - a_prev)
    return loss, grads


def nn_loss(model: NnModel, X: np.ndarray, y: np.ndarray) -> float:
    targets = (np.asarray(y) > 0).astype(np.float64)
    return bce_from_logits(model.decision_function(np.asarray(X, dtype=np.float64)), targets)


def nn_train(X: np.ndarray, y: np.ndarray, cfg: NnConfig | None = None) -> NnModel:
    cfg = cfg or NnConfig()
    X, y = check_training_data(X, y)
    n, d = X.shape
    layers = init_layers([d, *cfg.hidden_sizes, 1], cfg.seed)
    # separate stream for batch order
    rng = np.random.default_rng([cfg.seed, 1])

    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            loss, grads = loss_and_gradients(layers, X[batch], y[batch])
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch starting at {start}; "
                    f"try a smaller learning rate than {cfg.learning_rate}",
                    details={"epoch": epoch, "batch_start": start},
                )
            for (W, b), (gW, gb) in zip(layers, grads):
                gW *= cfg.learning_rate
                W -= gW
                b -= cfg.learning_rate * gb

    return NnModel(layers=tuple(layers))
