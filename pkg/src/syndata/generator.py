"""
Synthetic sample generation: subject profiles, error injection and Table-I-shaped datasets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple, Union

import numpy as np

from core.exceptions import GeneratorError
from core.logging import logger
from core.models.skeleton import Dataset, JointId, Label, SkeletonSample

from .templates import MotionTemplate

# Blast-Off sample counts per subject (subjects 1..5)
DEFAULT_POSITIVE_COUNTS = (11, 13, 10, 14, 15)
DEFAULT_NEGATIVE_COUNTS = (10, 13, 10, 14, 15)

HEIGHT_SCALE_RANGE = (0.7, 1.4)
PROFILE_HEIGHT_RANGE = (0.85, 1.15)
NOISE_SD_RANGE = (0.004, 0.01)
OFFSET_LOW = (-0.3, -1.0, 1.8)
OFFSET_HIGH = (0.3, -0.6, 2.8)
FRAME_RANGE = (90, 240)
FACTOR_RANGE = (0.4, 0.8)
COMPLETION_RANGE = (0.3, 0.7)
JITTER_RANGE = (0.05, 0.2)

IK_EPS = 1e-6


class Limb(str, Enum):
    ARM_LEFT = "arm-left"
    ARM_RIGHT = "arm-right"
    BOTH = "both"


@dataclass(frozen=True)
class RestrictedExtension:
    """Shoulder-to-wrist reach of the affected arms shrinks to ``factor`` of the clean motion."""
    limb: Limb
    factor: float

    def __post_init__(self):
        object.__setattr__(self, "limb", Limb(self.limb))
        if not 0.0 < self.factor < 1.0:
            raise GeneratorError(f"restricted extension factor must be in (0, 1), got {self.factor}")


@dataclass(frozen=True)
class IncompletePhase:
    """Keyframe ``phase_index`` is only reached to ``completion`` of the way from its predecessor."""
    phase_index: int
    completion: float

    def __post_init__(self):
        if self.phase_index < 1:
            raise GeneratorError(f"phase_index must be >= 1 (phase 0 has no predecessor), got {self.phase_index}")
        if not 0.0 < self.completion < 1.0:
            raise GeneratorError(f"completion must be in (0, 1), got {self.completion}")


@dataclass(frozen=True)
class TempoJitter:
    """Time warp w(t) = t + magnitude * t * (1 - t); magnitude < 1 keeps frames in order."""
    magnitude: float

    def __post_init__(self):
        if not 0.0 <= self.magnitude < 1.0:
            raise GeneratorError(f"tempo jitter magnitude must be in [0, 1), got {self.magnitude}")

    def warp(self, t: np.ndarray) -> np.ndarray:
        return t + self.magnitude * t * (1.0 - t)


ErrorSpec = Union[RestrictedExtension, IncompletePhase, TempoJitter]


@dataclass(frozen=True)
class SubjectProfile:
    subject_id: int
    height_scale: float = 1.0
    camera_offset: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "camera_offset", tuple(float(v) for v in self.camera_offset))
        if len(self.camera_offset) != 3:
            raise GeneratorError("camera_offset must be a 3-vector")
        lo, hi = HEIGHT_SCALE_RANGE
        if not lo <= self.height_scale <= hi:
            raise GeneratorError(f"height_scale must be in [{lo}, {hi}], got {self.height_scale}")
        if self.noise_sd < 0:
            raise GeneratorError(f"noise_sd must be non-negative, got {self.noise_sd}")


@dataclass(frozen=True)
class SamplePlan:
    subject_id: int
    sample_index: int
    label: Label
    errors: Tuple[ErrorSpec, ...]
    n_frames: int


_ARMS = {
    Limb.ARM_LEFT: ((JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT, JointId.HAND_LEFT),),
    Limb.ARM_RIGHT: ((JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT, JointId.HAND_RIGHT),),
}
_ARMS[Limb.BOTH] = _ARMS[Limb.ARM_LEFT] + _ARMS[Limb.ARM_RIGHT]


def _restrict_arm(frames: np.ndarray, joints, factor: float) -> None:
    """
    Pull the wrist to shoulder + factor * (wrist - shoulder) in every frame and re-solve the
    elbow so both arm segments keep their length and the arm keeps its bend direction.
    """
    s_id, e_id, w_id, h_id = (int(j) for j in joints)
    S, E, W, H = frames[:, s_id], frames[:, e_id], frames[:, w_id], frames[:, h_id]
    upper = np.linalg.norm(E - S, axis=1)
    fore = np.linalg.norm(W - E, axis=1)

    reach = W - S
    reach_len = np.linalg.norm(reach, axis=1)
    if np.any(reach_len < IK_EPS):
        raise GeneratorError("wrist coincides with shoulder; cannot restrict arm extension")
    u = reach / reach_len[:, None]
    target = np.clip(factor * reach_len, np.abs(upper - fore) + IK_EPS, upper + fore - IK_EPS)

    # bend direction: elbow offset perpendicular to the reach line
    rel = E - S
    perp = rel - np.sum(rel * u, axis=1)[:, None] * u
    perp_len = np.linalg.norm(perp, axis=1)
    straight = perp_len < 1e-9
    if straight.any():
        for axis in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])):
            fallback = axis - (u @ axis)[:, None] * u
            fallback_len = np.linalg.norm(fallback, axis=1)
            use = straight & (fallback_len > 1e-6)
            perp[use] = fallback[use]
            perp_len[use] = fallback_len[use]
            straight &= ~use
    perp = perp / perp_len[:, None]

    along = (upper ** 2 - fore ** 2 + target ** 2) / (2.0 * target)
    height = np.sqrt(np.maximum(upper ** 2 - along ** 2, 0.0))
    new_wrist = S + target[:, None] * u
    frames[:, e_id] = S + along[:, None] * u + height[:, None] * perp
    frames[:, h_id] = new_wrist + (H - W)
    frames[:, w_id] = new_wrist


def _apply_incomplete(poses: np.ndarray, spec: IncompletePhase) -> np.ndarray:
    if spec.phase_index >= poses.shape[0]:
        raise GeneratorError(f"phase_index {spec.phase_index} out of range for {poses.shape[0]} keyframes")
    out = poses.copy()
    prev = out[spec.phase_index - 1]
    out[spec.phase_index] = prev + spec.completion * (poses[spec.phase_index] - prev)
    return out


def generate_sample(template: MotionTemplate, profile: SubjectProfile, errors: Sequence[ErrorSpec] = (),
                    n_frames: int = 160, seed: Union[int, Sequence[int], None] = None) -> SkeletonSample:
    """
    One repetition: eased keyframe motion (time-warped, keyframes blended for incomplete
    phases), scaled about foot level, arms restricted, then noise and camera offset.
    Good iff ``errors`` is empty.
    """
    if n_frames < 2:
        raise GeneratorError(f"n_frames must be >= 2, got {n_frames}")
    errors = tuple(errors)
    for spec in errors:
        if not isinstance(spec, (RestrictedExtension, IncompletePhase, TempoJitter)):
            raise GeneratorError(f"unknown error spec {spec!r}")

    poses = template.poses
    t = np.linspace(0.0, 1.0, n_frames)
    for spec in errors:
        if isinstance(spec, IncompletePhase):
            poses = _apply_incomplete(poses, spec)
        elif isinstance(spec, TempoJitter):
            t = spec.warp(t)

    frames = template.trajectory(t, poses)
    if profile.height_scale != 1.0:
        frames = frames * profile.height_scale

    for spec in errors:
        if isinstance(spec, RestrictedExtension):
            for joints in _ARMS[spec.limb]:
                _restrict_arm(frames, joints, spec.factor)

    rng = np.random.default_rng(profile.seed if seed is None else seed)
    noise = rng.normal(0.0, 1.0, size=frames.shape)
    if profile.noise_sd > 0:
        frames = frames + profile.noise_sd * noise
    frames = frames + np.asarray(profile.camera_offset)

    return SkeletonSample(
        subject_id=profile.subject_id,
        exercise=template.exercise,
        label=Label.BAD if errors else Label.GOOD,
        frames=frames,
    )


def make_profile(subject_id: int, base_seed: int) -> SubjectProfile:
    rng = np.random.default_rng([base_seed, subject_id])
    return SubjectProfile(
        subject_id=subject_id,
        height_scale=float(rng.uniform(*PROFILE_HEIGHT_RANGE)),
        camera_offset=tuple(float(v) for v in rng.uniform(OFFSET_LOW, OFFSET_HIGH)),
        noise_sd=float(rng.uniform(*NOISE_SD_RANGE)),
        seed=base_seed,
    )


def random_error(rng: np.random.Generator, template: MotionTemplate) -> ErrorSpec:
    kind = int(rng.integers(3))
    if kind == 0:
        limb = list(Limb)[int(rng.integers(3))]
        return RestrictedExtension(limb, float(rng.uniform(*FACTOR_RANGE)))
    if kind == 1:
        phase = int(rng.integers(1, template.n_phases))
        return IncompletePhase(phase, float(rng.uniform(*COMPLETION_RANGE)))
    return TempoJitter(float(rng.uniform(*JITTER_RANGE)))


def plan_dataset(template: MotionTemplate, n_subjects: int, pos_per_subject: Sequence[int],
                 neg_per_subject: Sequence[int], base_seed: int) -> List[SamplePlan]:
    """Per subject: positives then negatives, each with its own seeded frame count and error"""
    if n_subjects < 1:
        raise GeneratorError(f"n_subjects must be positive, got {n_subjects}")
    pos = list(pos_per_subject)
    neg = list(neg_per_subject)
    if len(pos) != n_subjects or len(neg) != n_subjects:
        raise GeneratorError(f"need {n_subjects} positive and negative counts, got {len(pos)} and {len(neg)}")
    if min(pos + neg) < 1:
        raise GeneratorError("sample counts must be >= 1")

    plans: List[SamplePlan] = []
    for subject_id in range(1, n_subjects + 1):
        n_pos, n_neg = pos[subject_id - 1], neg[subject_id - 1]
        for sample_index in range(n_pos + n_neg):
            rng = np.random.default_rng([base_seed, subject_id, sample_index, 0])
            n_frames = int(rng.integers(FRAME_RANGE[0], FRAME_RANGE[1] + 1))
            good = sample_index < n_pos
            errors = () if good else (random_error(rng, template),)
            plans.append(SamplePlan(subject_id, sample_index, Label.GOOD if good else Label.BAD, errors, n_frames))
    return plans


def generate_dataset(template: MotionTemplate, n_subjects: int = 5,
                     pos_per_subject: Sequence[int] = DEFAULT_POSITIVE_COUNTS,
                     neg_per_subject: Sequence[int] = DEFAULT_NEGATIVE_COUNTS,
                     base_seed: int = 42) -> Dataset:
    start = time.time()
    logger.log_stage_start("generate", exercise=template.exercise, subjects=n_subjects, seed=base_seed)
    profiles = {s: make_profile(s, base_seed) for s in range(1, n_subjects + 1)}
    samples = [
        generate_sample(
            template,
            profiles[plan.subject_id],
            plan.errors,
            plan.n_frames,
            seed=[base_seed, plan.subject_id, plan.sample_index, 1],
        )
        for plan in plan_dataset(template, n_subjects, pos_per_subject, neg_per_subject, base_seed)
    ]
    logger.log_stage_complete("generate", time.time() - start, samples=len(samples))
    return Dataset(samples=tuple(samples), provenance=f"synthetic:{template.exercise}:seed={base_seed}")
