# Core models package
from .skeleton import (
    EXERCISES,
    N_JOINTS,
    Dataset,
    JointId,
    Label,
    SkeletonSample,
    ValidationResult,
)

__all__ = [
    "EXERCISES",
    "N_JOINTS",
    "Dataset",
    "JointId",
    "Label",
    "SkeletonSample",
    "ValidationResult",
]

from .features import (  # noqa: E402
    ANGLE_CHANNELS,
    ANGLE_SET,
    JOINT_CHANNELS,
    AngleDef,
    FeatureTable,
    FeatureVector,
    Representation,
)

__all__ += [
    "ANGLE_CHANNELS",
    "ANGLE_SET",
    "JOINT_CHANNELS",
    "AngleDef",
    "FeatureTable",
    "FeatureVector",
    "Representation",
]
