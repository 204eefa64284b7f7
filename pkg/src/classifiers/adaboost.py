"""
Discrete AdaBoost over exhaustive decision stumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .base import check_training_data

MIN_ERROR = 1e-10
ALPHA_CAP = 0.5 * math.log((1.0 - MIN_ERROR) / MIN_ERROR)
TIE_TOL = 1e-12

# round presets for the two evaluation protocols
HOLDOUT_ROUNDS = 90
RANDOM_SPLIT_ROUNDS = 300


class AdaBoostConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    rounds: int = Field(default=HOLDOUT_ROUNDS, ge=1)


@dataclass(frozen=True)
class Stump:
    """h(x) = polarity if x[feature] > threshold else -polarity"""
    feature: int
    threshold: float
    polarity: int
    alpha: float = 0.0

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.where(X[:, self.feature] > self.threshold, self.polarity, -self.polarity).astype(np.float64)


@dataclass(frozen=True)
class StumpFit:
    feature: int
    threshold: float
    polarity: int
    error: float


@dataclass(frozen=True, eq=False)
class AdaBoostModel:
    stumps: Tuple[Stump, ...]
    rounds: int
    errors: Tuple[float, ...] = ()

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        score = np.zeros(X.shape[0])
        for stump in self.stumps:
            score += stump.alpha * stump.predict(X)
        return score

    def staged_decision_function(self, X: np.ndarray) -> Iterator[np.ndarray]:
        """Ensemble score after each accepted round"""
        score = np.zeros(X.shape[0])
        for stump in self.stumps:
            score = score + stump.alpha * stump.predict(X)
            yield score

    def to_params(self) -> Dict[str, Any]:
        return {
            "rounds": self.rounds,
            "stumps": [
                {"feature": s.feature, "threshold": _encode_float(s.threshold), "polarity": s.polarity, "alpha": s.alpha}
                for s in self.stumps
            ],
            "errors": list(self.errors),
        }

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "AdaBoostModel":
        stumps = tuple(
            Stump(int(s["feature"]), float(s["threshold"]), int(s["polarity"]), float(s["alpha"]))
            for s in params["stumps"]
        )
        return cls(stumps=stumps, rounds=int(params["rounds"]), errors=tuple(float(e) for e in params.get("errors", ())))


def _encode_float(value: float):
    # JSON has no infinities
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def presort(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-feature sort order, sorted values, candidate thresholds and an additive 0/inf
    penalty for every split position.

    Split position k puts the k smallest values on the low side; k = 0 and k = n are the
    -inf/+inf sentinels, interior positions exist only between distinct values.
    """
    n, d = X.shape
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    thresholds = np.empty((n + 1, d))
    thresholds[0] = -np.inf
    thresholds[n] = np.inf
    thresholds[1:n] = (xs[:-1] + xs[1:]) / 2.0
    penalty = np.zeros((n + 1, d))
    penalty[1:n][xs[:-1] >= xs[1:]] = np.inf
    return order, xs, thresholds, penalty


def stump_search(X: np.ndarray, y: np.ndarray, weights: np.ndarray,
                 presorted: Optional[Tuple[np.ndarray, ...]] = None) -> StumpFit:
    """
    Global minimizer of the weighted 0/1 error over features x thresholds x polarities.

    Ties (within 1e-12) go to the lower feature index, then the lower threshold, then polarity +1.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    n, d = X.shape
    order, _, thresholds, penalty = presorted if presorted is not None else presort(X)

    positive = y > 0
    w_pos = np.where(positive, weights, 0.0)
    w_neg = weights - w_pos
    total_pos = float(w_pos.sum())
    total_neg = float(w_neg.sum())

    # margin[k] = positive minus negative weight among the k lowest values
    margin = np.zeros((n + 1, d))
    np.cumsum((w_pos - w_neg)[order], axis=0, out=margin[1:])

    # polarity +1 errs by total_neg + margin, polarity -1 by total_pos - margin
    shifted = margin + penalty
    col_plus = total_neg + shifted.min(axis=0)
    np.subtract(margin, penalty, out=shifted)
    col_minus = total_pos - shifted.max(axis=0)
    col_best = np.minimum(col_plus, col_minus)
    best = float(col_best.min())
    feature = int(np.flatnonzero(col_best <= best + TIE_TOL)[0])

    # exact errors of the winning feature decide the split position and polarity
    column = order[:, feature]
    cum_pos = np.concatenate(([0.0], np.cumsum(w_pos[column])))
    cum_neg = np.concatenate(([0.0], np.cumsum(w_neg[column])))
    err_plus = cum_pos + (cum_neg[n] - cum_neg) + penalty[:, feature]
    err_minus = cum_neg + (cum_pos[n] - cum_pos) + penalty[:, feature]
    limit = max(best + TIE_TOL, float(min(err_plus.min(), err_minus.min())))
    k = int(np.flatnonzero((err_plus <= limit) | (err_minus <= limit))[0])
    if err_plus[k] <= limit:
        polarity, error = 1, err_plus[k]
    else:
        polarity, error = -1, err_minus[k]
    return StumpFit(feature=feature, threshold=float(thresholds[k, feature]), polarity=polarity,
                    error=max(0.0, float(error)))


def adaboost_train(X: np.ndarray, y: np.ndarray, cfg: AdaBoostConfig | None = None) -> AdaBoostModel:
    """
    Stops early on a perfect stump (kept, alpha capped) or on a stump no better than chance (discarded).
    """
    cfg = cfg or AdaBoostConfig()
    X, y = check_training_data(X, y)
    n = X.shape[0]
    weights = np.full(n, 1.0 / n)
    presorted = presort(X)

    stumps = []
    errors = []
    for _ in range(cfg.rounds):
        fit = stump_search(X, y, weights, presorted)
        if fit.error >= 0.5:
            break
        if fit.error <= MIN_ERROR:
            stumps.append(Stump(fit.feature, fit.threshold, fit.polarity, ALPHA_CAP))
            errors.append(fit.error)
            break

        alpha = alpha_for_error(fit.error)
        stump = Stump(fit.feature, fit.threshold, fit.polarity, alpha)
        stumps.append(stump)
        errors.append(fit.error)

        weights = weights * np.exp(-alpha * y * stump.predict(X))
        weights /= weights.sum()

    return AdaBoostModel(stumps=tuple(stumps), rounds=cfg.rounds, errors=tuple(errors))


def alpha_for_error(error: float) -> float:
    error = min(max(error, MIN_ERROR), 1.0 - MIN_ERROR)
    return 0.5 * math.log((1.0 - error) / error)


def training_error_bound(errors) -> float:
    """prod_t 2 sqrt(e_t (1 - e_t)), an upper bound on the ensemble's training error rate"""
    bound = 1.0
    for error in errors:
        error = max(error, MIN_ERROR)
        bound *= 2.0 * math.sqrt(error * (1.0 - error))
    return bound
