"""
Dynamic time warping against a mean template of the positive training sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial.distance import cdist

from core.exceptions import TrainingError


class DtwConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # 1.0 takes the maximum training distance as the acceptance threshold
    threshold_quantile: float = Field(default=1.0, gt=0, le=1)


def dtw_distance(A: np.ndarray, B: np.ndarray) -> float:
    """
    Accumulated Euclidean frame cost along the cheapest warping path with steps
    (1, 0), (0, 1) and (1, 1), anchored at both ends.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim == 1:
        A = A[:, None]
    if B.ndim == 1:
        B = B[:, None]
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise TrainingError("dtw needs non-empty sequences")
    if A.shape[1] != B.shape[1]:
        raise TrainingError(f"frame dimensions differ: {A.shape[1]} vs {B.shape[1]}")

    cost = cdist(A, B, metric="euclidean")
    n, m = cost.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    # cells on one anti-diagonal only depend on the two previous ones
    for s in range(2, n + m + 1):
        i = np.arange(max(1, s - m), min(n, s - 1) + 1)
        j = s - i
        best = np.minimum(np.minimum(acc[i - 1, j], acc[i, j - 1]), acc[i - 1, j - 1])
        acc[i, j] = cost[i - 1, j - 1] + best
    return float(acc[n, m])


@dataclass(frozen=True, eq=False)
class DtwModel:
    template: np.ndarray   # (n_frames, frame_dim)
    threshold: float

    @property
    def frame_dim(self) -> int:
        return int(self.template.shape[1])

    def distances(self, X: np.ndarray) -> np.ndarray:
        """Flattened frame-major rows -> distance to the template"""
        sequences = X.reshape(X.shape[0], -1, self.frame_dim)
        return np.array([dtw_distance(seq, self.template) for seq in sequences])

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return self.threshold - self.distances(X)

    def to_params(self) -> Dict[str, Any]:
        return {"template": self.template.tolist(), "threshold": self.threshold}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "DtwModel":
        return cls(template=np.asarray(params["template"], dtype=np.float64), threshold=float(params["threshold"]))


def dtw_train(sequences_pos: np.ndarray, cfg: DtwConfig | None = None) -> DtwModel:
    """
    Template = frame-wise mean of the positive sequences; threshold = largest (or the
    configured quantile of) training distance to the template.
    """
    cfg = cfg or DtwConfig()
    seqs = np.asarray(sequences_pos, dtype=np.float64)
    if seqs.ndim != 3 or seqs.shape[0] == 0:
        raise TrainingError("dtw training needs at least one positive sequence of shape (frames, dim)")
    if not np.isfinite(seqs).all():
        raise TrainingError("training sequences contain non-finite values")

    template = seqs.mean(axis=0)
    distances = np.array([dtw_distance(seq, template) for seq in seqs])
    if cfg.threshold_quantile >= 1.0:
        threshold = float(distances.max())
    else:
        threshold = float(np.quantile(distances, cfg.threshold_quantile))
    return DtwModel(template=template, threshold=threshold)
