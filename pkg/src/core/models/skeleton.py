"""
Skeleton sample data model: the 20-joint Kinect v1 layout, labels, samples and datasets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Dict, Iterator, List, Tuple

import numpy as np

N_JOINTS = 20
EXERCISES = ("Blast-Off", "Body-Builder", "Finish-Line", "Reach-For-The-Stars", "Take-A-Bow")


class JointId(IntEnum):
    HIP_CENTER = 0
    SPINE = 1
    SHOULDER_CENTER = 2
    HEAD = 3
    SHOULDER_LEFT = 4
    ELBOW_LEFT = 5
    WRIST_LEFT = 6
    HAND_LEFT = 7
    SHOULDER_RIGHT = 8
    ELBOW_RIGHT = 9
    WRIST_RIGHT = 10
    HAND_RIGHT = 11
    HIP_LEFT = 12
    KNEE_LEFT = 13
    ANKLE_LEFT = 14
    FOOT_LEFT = 15
    HIP_RIGHT = 16
    KNEE_RIGHT = 17
    ANKLE_RIGHT = 18
    FOOT_RIGHT = 19


class Label(IntEnum):
    """Good repetitions are the positive class."""
    GOOD = 1
    BAD = -1

    @property
    def text(self) -> str:
        return "good" if self is Label.GOOD else "bad"

    @classmethod
    def from_text(cls, value: str) -> "Label":
        key = str(value).strip().lower()
        if key == "good":
            return cls.GOOD
        if key == "bad":
            return cls.BAD
        raise ValueError(f"unknown label {value!r}; expected 'good' or 'bad'")


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class SkeletonSample:
    """One repetition. ``frames`` has shape (n_frames, 20, 3) once valid."""
    subject_id: int
    exercise: str
    label: Label
    frames: np.ndarray
    preprocessed: bool = False

    def __post_init__(self):
        frames = np.array(self.frames, dtype=np.float64)
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "label", Label(self.label))

    @property
    def n_frames(self) -> int:
        return int(self.frames.shape[0]) if self.frames.ndim >= 1 else 0

    def with_frames(self, frames: np.ndarray, preprocessed: bool | None = None) -> "SkeletonSample":
        return replace(
            self,
            frames=frames,
            preprocessed=self.preprocessed if preprocessed is None else preprocessed,
        )

    def joint(self, joint: JointId) -> np.ndarray:
        """Trajectory of one joint, shape (n_frames, 3)"""
        return self.frames[:, int(joint), :]

    def same_as(self, other: "SkeletonSample") -> bool:
        return (
            self.subject_id == other.subject_id
            and self.exercise == other.exercise
            and self.label == other.label
            and self.preprocessed == other.preprocessed
            and self.frames.shape == other.frames.shape
            and np.array_equal(self.frames, other.frames)
        )


@dataclass(frozen=True)
class Dataset:
    samples: Tuple[SkeletonSample, ...]
    provenance: str = ""
    preprocessed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[SkeletonSample]:
        return iter(self.samples)

    def __getitem__(self, index: int) -> SkeletonSample:
        return self.samples[index]

    @property
    def subject_ids(self) -> List[int]:
        return sorted({s.subject_id for s in self.samples})

    @property
    def labels(self) -> np.ndarray:
        return np.array([int(s.label) for s in self.samples], dtype=np.int64)

    def subset(self, indices) -> "Dataset":
        return Dataset(
            samples=tuple(self.samples[i] for i in indices),
            provenance=self.provenance,
            preprocessed=self.preprocessed,
        )

    def counts(self) -> Dict[Tuple[int, Label], int]:
        """Sample counts per (subject, label)"""
        return dict(Counter((s.subject_id, s.label) for s in self.samples))

    def same_as(self, other: "Dataset") -> bool:
        return (
            len(self) == len(other)
            and self.preprocessed == other.preprocessed
            and all(a.same_as(b) for a, b in zip(self.samples, other.samples))
        )
