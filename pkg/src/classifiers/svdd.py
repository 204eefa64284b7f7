"""
One-class model: a hypersphere around the mean of the positive training samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.exceptions import TrainingError


class SvddConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu: float = Field(default=0.1, gt=0, le=1)


@dataclass(frozen=True, eq=False)
class SvddModel:
    center: np.ndarray
    radius_sq: float
    nu: float

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """radius^2 - squared distance to the center; positive inside the sphere"""
        diff = X - self.center
        return self.radius_sq - np.einsum("ij,ij->i", diff, diff)

    def to_params(self) -> Dict[str, Any]:
        return {"center": self.center.tolist(), "radius_sq": self.radius_sq, "nu": self.nu}

    @classmethod
    def from_params(cls, params: Dict[str, Any]) -> "SvddModel":
        return cls(
            center=np.asarray(params["center"], dtype=np.float64),
            radius_sq=float(params["radius_sq"]),
            nu=float(params["nu"]),
        )


def svdd_train(X_pos: np.ndarray, cfg: SvddConfig | None = None) -> SvddModel:
    """
    The radius is the ceil((1 - nu) * n)-th smallest squared distance, so at most a
    nu fraction of the training positives fall outside.
    """
    cfg = cfg or SvddConfig()
    X_pos = np.asarray(X_pos, dtype=np.float64)
    if X_pos.ndim != 2 or X_pos.shape[0] == 0:
        raise TrainingError("one-class training needs at least one positive sample")
    if not np.isfinite(X_pos).all():
        raise TrainingError("training matrix contains non-finite values")

    n = X_pos.shape[0]
    center = X_pos.mean(axis=0)
    diff = X_pos - center
    dist_sq = np.sort(np.einsum("ij,ij->i", diff, diff))
    k = max(1, math.ceil((1.0 - cfg.nu) * n - 1e-9))
    return SvddModel(center=center, radius_sq=float(dist_sq[k - 1]), nu=cfg.nu)
