"""
Shared contract for the classifier families: a trained model is a signed scorer, Good iff score > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Protocol, Tuple, Union

import numpy as np

from core.exceptions import TrainingError
from core.models.features import FeatureTable, FeatureVector, Representation
from core.models.skeleton import Label


class Family(str, Enum):
    SVM = "svm"
    SVDD = "svdd"
    ADABOOST = "adaboost"
    DTW = "dtw"
    NN = "nn"
    MNN = "mnn"

    @classmethod
    def parse(cls, value: str) -> "Family":
        key = str(value).strip().lower()
        for family in cls:
            if family.value == key:
                return family
        raise ValueError(f"unknown model family {value!r}; expected one of {', '.join(f.value for f in cls)}")

    @property
    def one_class(self) -> bool:
        """Families trained on positive samples only"""
        return self in (Family.SVDD, Family.DTW)


class Scorer(Protocol):
    def decision_function(self, X: np.ndarray) -> np.ndarray: ...

    def to_params(self) -> Dict[str, Any]: ...


def check_training_data(X: np.ndarray, y: np.ndarray, both_classes: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2:
        raise TrainingError(f"training matrix must be 2-D, got shape {X.shape}")
    if X.shape[0] != y.shape[0]:
        raise TrainingError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
    if not np.isin(y, (-1.0, 1.0)).all():
        raise TrainingError("labels must be +1 (good) or -1 (bad)")
    if both_classes and (not (y > 0).any() or not (y < 0).any()):
        raise TrainingError("training data holds a single class; both good and bad samples are required")
    if not np.isfinite(X).all():
        raise TrainingError("training matrix contains non-finite values")
    return X, y


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """One fitted family member plus the representation and dimension it was trained on."""
    family: Family
    rep: Representation
    dimension: int
    model: Scorer
    config: Dict[str, Any] = field(default_factory=dict)

    def scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.dimension:
            raise TrainingError(
                f"feature dimension {X.shape[1]} does not match the model's {self.dimension} "
                f"({self.family.value} on {self.rep.value})",
                details={"dimension": int(X.shape[1]), "expected": self.dimension},
            )
        return np.asarray(self.model.decision_function(X), dtype=np.float64)

    def score_table(self, table: FeatureTable) -> np.ndarray:
        if table.rep is not self.rep:
            raise TrainingError(f"features are {table.rep.value} but the model expects {self.rep.value}")
        return self.scores(table.values)

    def predict_table(self, table: FeatureTable) -> Tuple[np.ndarray, np.ndarray]:
        scores = self.score_table(table)
        return np.where(scores > 0, int(Label.GOOD), int(Label.BAD)), scores


def decide(score: float) -> Label:
    """The decision boundary itself is Bad"""
    return Label.GOOD if score > 0 else Label.BAD


def predict(model: TrainedModel, x: Union[FeatureVector, np.ndarray]) -> Tuple[Label, float]:
    """Label and signed score for one feature vector (or one per-frame sequence for DTW)"""
    if isinstance(x, FeatureVector):
        if x.rep is not model.rep:
            raise TrainingError(f"feature vector is {x.rep.value} but the model expects {model.rep.value}")
        values = x.values
    else:
        values = np.asarray(x, dtype=np.float64)
        if values.ndim == 2:
            values = values.reshape(-1)
    score = float(model.scores(values)[0])
    return decide(score), score
