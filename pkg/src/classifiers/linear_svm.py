"""
Linear SVM trained with Pegasos-style stochastic subgradient steps on the hinge loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .base import check_training_data


class SvmConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    lam: float = Field(default=0.01, gt=0)
    epochs: int = Field(default=20, ge=1)
    seed: int = 0


@dataclass(frozen=True, eq=False)
class LinearSvmModel:
    weights: np.ndarray
    bias: float

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights + self.bias

    def to_params(self) -> Dict[str, Any]:
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "LinearSvmModel":
        return cls(weights=np.asarray(params["weights"], dtype=np.float64), bias=float(params["bias"]))


def hinge_objective(model: LinearSvmModel, X: np.ndarray, y: np.ndarray, lam: float) -> float:
    """lam/2 * |w|^2 + mean hinge loss (the bias is not regularized)"""
    margins = y * model.decision_function(X)
    return 0.5 * lam * float(model.weights @ model.weights) + float(np.maximum(0.0, 1.0 - margins).mean())


def svm_train(X: np.ndarray, y: np.ndarray, cfg: SvmConfig | None = None) -> LinearSvmModel:
    """
    Minimize the regularized hinge objective with step 1/(lam*t) at update t.

    Samples are visited in a freshly shuffled order each epoch; the returned model is the
    average of the iterates from the second half of all updates.
    """
    cfg = cfg or SvmConfig()
    X, y = check_training_data(X, y)
    n, d = X.shape
    rng = np.random.default_rng(cfg.seed)

    w = np.zeros(d)
    b = 0.0
    total = cfg.epochs * n
    average_from = total // 2 + 1
    w_sum = np.zeros(d)
    b_sum = 0.0
    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (cfg.lam * t)
            margin = y[i] * (X[i] @ w + b)
            w *= 1.0 - eta * cfg.lam
            if margin < 1.0:
                w += eta * y[i] * X[i]
                b += eta * y[i]
            if t >= average_from:
                w_sum += w
                b_sum += b

    count = total - average_from + 1
    return LinearSvmModel(weights=w_sum / count, bias=b_sum / count)
