"""
Custom exceptions for the exercise quality toolkit
"""


class ExerciseQualityError(Exception):
    """Base exception for all toolkit errors"""
    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}


class DatasetError(ExerciseQualityError):
    """Errors related to dataset ingestion and sample schema"""
    pass


class PreprocessError(ExerciseQualityError):
    """Errors raised by resampling, scaling or re-centering"""
    pass


class FeatureError(ExerciseQualityError):
    """Errors related to feature extraction (degenerate rays, wrong layout)"""
    pass


class TrainingError(ExerciseQualityError):
    """Errors raised while fitting or applying a classifier"""
    pass


class EvaluationError(ExerciseQualityError):
    """Errors related to splits, metrics and ROC computation"""
    pass


class GeneratorError(ExerciseQualityError):
    """Errors related to synthetic motion templates and error specs"""
    pass


class ConfigurationError(ExerciseQualityError):
    """Errors related to configuration issues"""
    pass


class ValidationError(ExerciseQualityError):
    """Errors related to input validation"""
    pass


class StorageError(ExerciseQualityError):
    """Errors writing result files"""
    pass


class DatabaseError(ExerciseQualityError):
    """Errors related to the run history database"""
    pass
