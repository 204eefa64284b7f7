"""
Synthetic LAM exercise recordings: keyframe templates plus error injection.
"""

from .generator import (
    DEFAULT_NEGATIVE_COUNTS,
    DEFAULT_POSITIVE_COUNTS,
    IncompletePhase,
    Limb,
    RestrictedExtension,
    SamplePlan,
    SubjectProfile,
    TempoJitter,
    generate_dataset,
    generate_sample,
    make_profile,
    plan_dataset,
)
from .templates import ArmPose, BodyPose, MotionTemplate, build_pose, builtin_template

__all__ = [
    "DEFAULT_NEGATIVE_COUNTS", "DEFAULT_POSITIVE_COUNTS",
    "IncompletePhase", "Limb", "RestrictedExtension", "SamplePlan", "SubjectProfile", "TempoJitter",
    "generate_dataset", "generate_sample", "make_profile", "plan_dataset",
    "ArmPose", "BodyPose", "MotionTemplate", "build_pose", "builtin_template",
]
