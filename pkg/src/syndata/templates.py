"""
Hand-authored keyframe templates for the five LAM exercises.

Coordinates are meters with Y up and Z toward the camera; the subject faces +Z and
the skeleton's own left side is +X. Every keyframe is grounded so both ankles sit at
y = 0.08 centered on x = z = 0, which makes the origin the foot level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from core.exceptions import GeneratorError
from core.models.skeleton import EXERCISES, N_JOINTS, JointId

# Segment lengths of a 1.75 m adult
PELVIS_HALF_WIDTH = 0.10
HIP_DROP = 0.05
SPINE_LOW = 0.20
SPINE_HIGH = 0.30
NECK_HEAD = 0.22
SHOULDER_HALF_WIDTH = 0.18
UPPER_ARM = 0.30
FOREARM = 0.27
HAND = 0.08
THIGH = 0.45
SHANK = 0.42
FOOT_DOWN = 0.05
FOOT_FORWARD = 0.11
ANKLE_HEIGHT = 0.08


@dataclass(frozen=True)
class ArmPose:
    """elevation: 0 down, 90 forward, 180 up, negative behind; abduction: 0 sagittal, 90 lateral"""
    elevation: float = 10.0
    abduction: float = 0.0
    elbow_flex: float = 0.0


@dataclass(frozen=True)
class BodyPose:
    """Degrees. hip_flex 0 is a standing thigh, 90 a seated one; knee_flex bends the shank back."""
    left_arm: ArmPose = ArmPose()
    right_arm: ArmPose = ArmPose()
    hip_flex: float = 0.0
    knee_flex: float = 0.0
    trunk_lean: float = 0.0


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _arm(shoulder: np.ndarray, arm: ArmPose, side: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    theta, psi = np.radians(arm.elevation), np.radians(arm.abduction)
    d = np.array([side * np.sin(theta) * np.sin(psi), -np.cos(theta), np.sin(theta) * np.cos(psi)])
    elbow = shoulder + UPPER_ARM * d

    # forearm curls toward "up" within the plane it shares with the upper arm
    up = np.array([0.0, 1.0, 0.0])
    bend = up - (up @ d) * d
    if np.linalg.norm(bend) < 1e-6:
        bend = np.array([0.0, 0.0, 1.0]) - d[2] * d
    bend = _unit(bend)
    phi = np.radians(arm.elbow_flex)
    f = np.cos(phi) * d + np.sin(phi) * bend
    wrist = elbow + FOREARM * f
    return elbow, wrist, wrist + HAND * f


def _leg(hip: np.ndarray, pose: BodyPose) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    alpha = np.radians(pose.hip_flex)
    shank_angle = np.radians(pose.hip_flex - pose.knee_flex)
    knee = hip + THIGH * np.array([0.0, -np.cos(alpha), np.sin(alpha)])
    ankle = knee + SHANK * np.array([0.0, -np.cos(shank_angle), np.sin(shank_angle)])
    return knee, ankle, ankle + np.array([0.0, -FOOT_DOWN, FOOT_FORWARD])


def build_pose(pose: BodyPose) -> np.ndarray:
    """Joint positions (20, 3) of one grounded keyframe"""
    P = np.zeros((N_JOINTS, 3))
    lean = np.radians(pose.trunk_lean)
    trunk = np.array([0.0, np.cos(lean), np.sin(lean)])

    hip_center = np.zeros(3)
    P[JointId.HIP_CENTER] = hip_center
    P[JointId.SPINE] = hip_center + SPINE_LOW * trunk
    P[JointId.SHOULDER_CENTER] = P[JointId.SPINE] + SPINE_HIGH * trunk
    P[JointId.HEAD] = P[JointId.SHOULDER_CENTER] + NECK_HEAD * trunk

    for side, shoulder_id, arm, ids in (
        (1.0, JointId.SHOULDER_LEFT, pose.left_arm, (JointId.ELBOW_LEFT, JointId.WRIST_LEFT, JointId.HAND_LEFT)),
        (-1.0, JointId.SHOULDER_RIGHT, pose.right_arm, (JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT, JointId.HAND_RIGHT)),
    ):
        shoulder = P[JointId.SHOULDER_CENTER] + np.array([side * SHOULDER_HALF_WIDTH, 0.0, 0.0])
        P[shoulder_id] = shoulder
        for joint, position in zip(ids, _arm(shoulder, arm, side)):
            P[joint] = position

    for side, hip_id, ids in (
        (1.0, JointId.HIP_LEFT, (JointId.KNEE_LEFT, JointId.ANKLE_LEFT, JointId.FOOT_LEFT)),
        (-1.0, JointId.HIP_RIGHT, (JointId.KNEE_RIGHT, JointId.ANKLE_RIGHT, JointId.FOOT_RIGHT)),
    ):
        hip = hip_center + np.array([side * PELVIS_HALF_WIDTH, -HIP_DROP, 0.0])
        P[hip_id] = hip
        for joint, position in zip(ids, _leg(hip, pose)):
            P[joint] = position

    ankles = P[[JointId.ANKLE_LEFT, JointId.ANKLE_RIGHT]]
    shift = np.array([-ankles[:, 0].mean(), ANKLE_HEIGHT - ankles[:, 1].min(), -ankles[:, 2].mean()])
    return P + shift


def smoothstep(u: np.ndarray) -> np.ndarray:
    return u * u * (3.0 - 2.0 * u)


@dataclass(frozen=True, eq=False)
class MotionTemplate:
    exercise: str
    phase_times: Tuple[float, ...]
    poses: np.ndarray                 # (n_phases, 20, 3)
    illustrative: bool = False
    description: str = ""

    def __post_init__(self):
        times = tuple(float(t) for t in self.phase_times)
        poses = np.array(self.poses, dtype=np.float64)
        if len(times) < 2:
            raise GeneratorError(f"{self.exercise}: a template needs at least two keyframes")
        if times[0] != 0.0 or times[-1] != 1.0:
            raise GeneratorError(f"{self.exercise}: phase times must start at 0 and end at 1, got {times}")
        if any(b <= a for a, b in zip(times[:-1], times[1:])):
            raise GeneratorError(f"{self.exercise}: phase times must be strictly increasing, got {times}")
        if poses.shape != (len(times), N_JOINTS, 3):
            raise GeneratorError(
                f"{self.exercise}: poses have shape {poses.shape}, expected ({len(times)}, {N_JOINTS}, 3)"
            )
        if not np.isfinite(poses).all():
            raise GeneratorError(f"{self.exercise}: keyframe poses must be finite")
        poses.setflags(write=False)
        object.__setattr__(self, "phase_times", times)
        object.__setattr__(self, "poses", poses)

    @property
    def n_phases(self) -> int:
        return len(self.phase_times)

    def with_poses(self, poses: np.ndarray) -> "MotionTemplate":
        return MotionTemplate(self.exercise, self.phase_times, poses, self.illustrative, self.description)

    def trajectory(self, t: np.ndarray, poses: Optional[np.ndarray] = None) -> np.ndarray:
        """Smoothstep-eased keyframe interpolation at normalized times ``t`` -> (len(t), 20, 3)"""
        poses = self.poses if poses is None else poses
        t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
        knots = np.asarray(self.phase_times)
        segment = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(knots) - 2)
        u = (t - knots[segment]) / (knots[segment + 1] - knots[segment])
        s = smoothstep(u)[:, None, None]
        start = poses[segment]
        return start + s * (poses[segment + 1] - start)


ARMS_FRONT = ArmPose(elevation=90.0)
ARMS_BACK = ArmPose(elevation=-45.0)
ARMS_UP = ArmPose(elevation=180.0)
ARMS_DOWN = ArmPose(elevation=10.0)
SEATED = dict(hip_flex=90.0, knee_flex=90.0)


def _blast_off() -> MotionTemplate:
    poses = [
        BodyPose(left_arm=ARMS_FRONT, right_arm=ARMS_FRONT, **SEATED),
        BodyPose(left_arm=ARMS_BACK, right_arm=ARMS_BACK, trunk_lean=20.0, **SEATED),
        BodyPose(left_arm=ARMS_UP, right_arm=ARMS_UP),
    ]
    return MotionTemplate(
        "Blast-Off", (0.0, 0.5, 1.0), np.stack([build_pose(p) for p in poses]),
        description="seated with arms stretched in front, arms swung back behind, standing with arms fully up",
    )


def _body_builder() -> MotionTemplate:
    lateral = ArmPose(elevation=90.0, abduction=90.0)
    flexed = ArmPose(elevation=90.0, abduction=90.0, elbow_flex=100.0)
    poses = [
        BodyPose(left_arm=ARMS_DOWN, right_arm=ARMS_DOWN),
        BodyPose(left_arm=lateral, right_arm=lateral),
        BodyPose(left_arm=flexed, right_arm=flexed, knee_flex=25.0, hip_flex=20.0),
        BodyPose(left_arm=ARMS_DOWN, right_arm=ARMS_DOWN),
    ]
    return MotionTemplate(
        "Body-Builder", (0.0, 0.35, 0.65, 1.0), np.stack([build_pose(p) for p in poses]),
        illustrative=True, description="arms raised sideways, elbows flexed into a double-biceps pose, released",
    )


def _finish_line() -> MotionTemplate:
    victory = ArmPose(elevation=160.0, abduction=35.0)
    poses = [
        BodyPose(left_arm=ARMS_DOWN, right_arm=ARMS_DOWN),
        BodyPose(left_arm=victory, right_arm=victory, trunk_lean=-10.0),
        BodyPose(left_arm=ARMS_DOWN, right_arm=ARMS_DOWN),
    ]
    return MotionTemplate(
        "Finish-Line", (0.0, 0.5, 1.0), np.stack([build_pose(p) for p in poses]),
        illustrative=True, description="arms thrown up into a wide V with a slight backward lean",
    )


def _reach_for_the_stars() -> MotionTemplate:
    crouch = dict(hip_flex=60.0, knee_flex=100.0, trunk_lean=30.0)
    poses = [
        BodyPose(left_arm=ArmPose(elevation=30.0), right_arm=ArmPose(elevation=30.0), **crouch),
        BodyPose(left_arm=ArmPose(elevation=170.0, abduction=20.0), right_arm=ArmPose(elevation=170.0, abduction=20.0)),
        BodyPose(left_arm=ArmPose(elevation=180.0), right_arm=ArmPose(elevation=145.0, abduction=30.0)),
        BodyPose(left_arm=ARMS_DOWN, right_arm=ARMS_DOWN),
    ]
    return MotionTemplate(
        "Reach-For-The-Stars", (0.0, 0.4, 0.7, 1.0), np.stack([build_pose(p) for p in poses]),
        illustrative=True, description="rise from a crouch to a full overhead reach, left arm highest, then relax",
    )


def _take_a_bow() -> MotionTemplate:
    lateral = ArmPose(elevation=80.0, abduction=80.0)
    poses = [
        BodyPose(left_arm=lateral, right_arm=lateral),
        BodyPose(left_arm=ArmPose(elevation=-30.0), right_arm=ArmPose(elevation=-30.0), trunk_lean=55.0, hip_flex=10.0),
        BodyPose(left_arm=lateral, right_arm=lateral),
    ]
    return MotionTemplate(
        "Take-A-Bow", (0.0, 0.5, 1.0), np.stack([build_pose(p) for p in poses]),
        illustrative=True, description="arms open to the side, deep forward bow with arms swept back, return",
    )


_BUILDERS = {
    "Blast-Off": _blast_off,
    "Body-Builder": _body_builder,
    "Finish-Line": _finish_line,
    "Reach-For-The-Stars": _reach_for_the_stars,
    "Take-A-Bow": _take_a_bow,
}
_CACHE: Dict[str, MotionTemplate] = {}


def canonical_exercise(name: str) -> str:
    key = str(name).strip().lower().replace("_", "-").replace(" ", "-")
    for exercise in EXERCISES:
        if exercise.lower() == key:
            return exercise
    raise GeneratorError(f"unknown exercise {name!r}; expected one of {', '.join(EXERCISES)}")


def builtin_template(exercise: str) -> MotionTemplate:
    """Blast-Off follows the published three-phase description; the other four are illustrative"""
    name = canonical_exercise(exercise)
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]
