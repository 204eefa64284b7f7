"""
Core module for the exercise quality toolkit
Contains data model, pipeline services, error handling, logging, and validation
"""

from .exceptions import (
    ExerciseQualityError,
    DatasetError,
    PreprocessError,
    FeatureError,
    TrainingError,
    EvaluationError,
    GeneratorError,
    ConfigurationError,
    ValidationError,
    StorageError,
    DatabaseError,
)

from .logging import QualityLogger, logger

from .validators import InputValidator, ConfigValidator

__all__ = [
    # Exceptions
    "ExerciseQualityError",
    "DatasetError",
    "PreprocessError",
    "FeatureError",
    "TrainingError",
    "EvaluationError",
    "GeneratorError",
    "ConfigurationError",
    "ValidationError",
    "StorageError",
    "DatabaseError",

    # Logging
    "QualityLogger",
    "logger",

    # Validators
    "InputValidator",
    "ConfigValidator"
]
