"""
Shared fixtures: hand-built skeletons with exactly representable coordinates and a small
seeded synthetic dataset.
"""

import numpy as np
import pytest

from core.models.skeleton import N_JOINTS, Dataset, JointId, Label, SkeletonSample
from core.services.preprocess import PreprocessConfig, preprocess_dataset
from syndata.generator import generate_dataset
from syndata.templates import builtin_template


def tpose() -> np.ndarray:
    """Standing T-pose, arms and legs straight; every coordinate is a dyadic fraction"""
    P = np.zeros((N_JOINTS, 3))
    P[JointId.HIP_CENTER] = (0.0, 1.0, 0.0)
    P[JointId.SPINE] = (0.0, 1.25, 0.0)
    P[JointId.SHOULDER_CENTER] = (0.0, 1.5, 0.0)
    P[JointId.HEAD] = (0.0, 1.75, 0.0)
    for side, ids in ((-1.0, (JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT, JointId.HAND_LEFT)),
                      (1.0, (JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT, JointId.HAND_RIGHT))):
        for k, joint in enumerate(ids):
            P[joint] = (side * 0.25 * (k + 1), 1.5, 0.0)
    for side, ids in ((-1.0, (JointId.HIP_LEFT, JointId.KNEE_LEFT, JointId.ANKLE_LEFT, JointId.FOOT_LEFT)),
                      (1.0, (JointId.HIP_RIGHT, JointId.KNEE_RIGHT, JointId.ANKLE_RIGHT, JointId.FOOT_RIGHT))):
        hip, knee, ankle, foot = ids
        P[hip] = (side * 0.125, 1.0, 0.0)
        P[knee] = (side * 0.125, 0.5, 0.0)
        P[ankle] = (side * 0.125, 0.0, 0.0)
        P[foot] = (side * 0.125, 0.0, 0.125)
    return P


def make_sample(frames, label=Label.GOOD, subject_id=1, preprocessed=False) -> SkeletonSample:
    return SkeletonSample(subject_id=subject_id, exercise="Blast-Off", label=label,
                          frames=np.asarray(frames, dtype=np.float64), preprocessed=preprocessed)


def random_motion(rng: np.random.Generator, n_frames: int) -> np.ndarray:
    """T-pose plus a smooth random wobble, so no joint triple collapses"""
    t = np.linspace(0.0, 1.0, n_frames)[:, None, None]
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(1, N_JOINTS, 3))
    wobble = 0.05 * np.sin(2.0 * np.pi * t + phase)
    return tpose()[None] + wobble


@pytest.fixture
def tpose_frames():
    return tpose()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_raw_dataset() -> Dataset:
    """3 subjects x (4 good + 4 bad) Blast-Off repetitions"""
    return generate_dataset(builtin_template("Blast-Off"), n_subjects=3,
                            pos_per_subject=(4, 4, 4), neg_per_subject=(4, 4, 4), base_seed=7)


@pytest.fixture(scope="session")
def small_dataset(small_raw_dataset) -> Dataset:
    return preprocess_dataset(small_raw_dataset, PreprocessConfig())


@pytest.fixture(scope="session")
def blast_off_dataset() -> Dataset:
    return generate_dataset(builtin_template("Blast-Off"), base_seed=42)
