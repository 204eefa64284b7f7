"""
Feature representation types.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .skeleton import N_JOINTS, JointId

JOINT_CHANNELS = 3 * N_JOINTS


@dataclass(frozen=True)
class AngleDef:
    name: str
    a: JointId
    vertex: JointId
    c: JointId


# Order is the feature layout order within a frame.
ANGLE_SET: Tuple[AngleDef, ...] = (
    AngleDef("KneeLeft", JointId.HIP_LEFT, JointId.KNEE_LEFT, JointId.ANKLE_LEFT),
    AngleDef("KneeRight", JointId.HIP_RIGHT, JointId.KNEE_RIGHT, JointId.ANKLE_RIGHT),
    AngleDef("ElbowLeft", JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT),
    AngleDef("ElbowRight", JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT),
    AngleDef("FemurSpineLeft", JointId.KNEE_LEFT, JointId.HIP_LEFT, JointId.SPINE),
    AngleDef("FemurSpineRight", JointId.KNEE_RIGHT, JointId.HIP_RIGHT, JointId.SPINE),
    AngleDef("ElbowShoulderHipLeft", JointId.ELBOW_LEFT, JointId.SHOULDER_LEFT, JointId.HIP_CENTER),
    AngleDef("ElbowShoulderHipRight", JointId.ELBOW_RIGHT, JointId.SHOULDER_RIGHT, JointId.HIP_CENTER),
    AngleDef("ElbowShoulderShoulderLeft", JointId.ELBOW_LEFT, JointId.SHOULDER_LEFT, JointId.SHOULDER_RIGHT),
    AngleDef("ElbowShoulderShoulderRight", JointId.ELBOW_RIGHT, JointId.SHOULDER_RIGHT, JointId.SHOULDER_LEFT),
)
ANGLE_CHANNELS = len(ANGLE_SET)


class Representation(str, Enum):
    JOINT_TIME = "joint-time"
    ANGLE_TIME = "angle-time"
    JOINT_FREQ = "joint-freq"
    ANGLE_FREQ = "angle-freq"

    @classmethod
    def parse(cls, value: str) -> "Representation":
        key = str(value).strip().lower().replace("_", "-")
        for rep in cls:
            if rep.value == key:
                return rep
        raise ValueError(
            f"unknown representation {value!r}; expected one of {', '.join(r.value for r in cls)}"
        )

    @property
    def is_frequency(self) -> bool:
        return self in (Representation.JOINT_FREQ, Representation.ANGLE_FREQ)

    @property
    def uses_angles(self) -> bool:
        return self in (Representation.ANGLE_TIME, Representation.ANGLE_FREQ)

    @property
    def channels(self) -> int:
        return ANGLE_CHANNELS if self.uses_angles else JOINT_CHANNELS

    def dimension(self, n_frames: int) -> int:
        return self.channels * n_frames

    def frequency_counterpart(self) -> "Representation":
        return Representation.ANGLE_FREQ if self.uses_angles else Representation.JOINT_FREQ

    def time_counterpart(self) -> "Representation":
        return Representation.ANGLE_TIME if self.uses_angles else Representation.JOINT_TIME


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Time-domain vectors are frame-major, frequency-domain vectors are channel-major."""
    values: np.ndarray
    rep: Representation
    source: Optional[Tuple[int, int]] = None  # (sample index, subject id)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_frames(self) -> int:
        return len(self) // self.rep.channels

    def as_sequence(self) -> np.ndarray:
        """Per-frame view (n_frames, channels); time-domain only"""
        if self.rep.is_frequency:
            raise ValueError("frequency vectors have no per-frame layout")
        return self.values.reshape(self.n_frames, self.rep.channels)


@dataclass(frozen=True, eq=False)
class FeatureTable:
    """Feature matrix for a whole dataset, one row per sample."""
    values: np.ndarray      # (n_samples, dimension)
    labels: np.ndarray      # (n_samples,) of +1/-1
    subject_ids: np.ndarray  # (n_samples,)
    rep: Representation

    def __len__(self) -> int:
        return int(self.values.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.values.shape[1])

    @property
    def n_frames(self) -> int:
        return self.dimension // self.rep.channels

    def sequences(self) -> np.ndarray:
        """(n_samples, n_frames, channels) view for time-domain tables"""
        if self.rep.is_frequency:
            raise ValueError("frequency tables have no per-frame layout")
        return self.values.reshape(len(self), self.n_frames, self.rep.channels)

    def take(self, indices) -> "FeatureTable":
        indices = np.asarray(indices, dtype=np.int64)
        return FeatureTable(
            values=self.values[indices],
            labels=self.labels[indices],
            subject_ids=self.subject_ids[indices],
            rep=self.rep,
        )

    def row(self, index: int) -> FeatureVector:
        return FeatureVector(self.values[index], self.rep, (index, int(self.subject_ids[index])))
