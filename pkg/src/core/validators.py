"""
Input validation for the exercise quality toolkit
"""

import re
from typing import Any, List, Tuple

from .exceptions import ValidationError
from .models.skeleton import EXERCISES


class InputValidator:
    """Input validation utilities"""

    # "holdout:3,4,5/1,2" or "random:80"
    HOLDOUT_PATTERN = re.compile(r'^holdout:(\d+(?:,\d+)*)/(\d+(?:,\d+)*)$')
    RANDOM_PATTERN = re.compile(r'^random:(\d+)$')

    @staticmethod
    def validate_positive_int(value: Any, field_name: str) -> int:
        """Validate that a value is a positive integer"""
        if isinstance(value, bool):
            raise ValidationError(f"{field_name} must be an integer")
        try:
            int_value = int(value)
        except (ValueError, TypeError):
            raise ValidationError(f"{field_name} must be an integer")

        if int_value != value and not isinstance(value, str):
            raise ValidationError(f"{field_name} must be an integer")
        if int_value < 1:
            raise ValidationError(f"{field_name} must be positive")

        return int_value

    @staticmethod
    def validate_scale_range(lo: Any, hi: Any) -> Tuple[float, float]:
        """Validate a scaling target range lo < hi"""
        try:
            lo_f, hi_f = float(lo), float(hi)
        except (ValueError, TypeError):
            raise ValidationError("scale bounds must be numbers")
        if not lo_f < hi_f:
            raise ValidationError(f"scale-lo ({lo_f}) must be smaller than scale-hi ({hi_f})")
        return lo_f, hi_f

    @staticmethod
    def validate_exercise_name(name: str) -> str:
        """Map a user-facing exercise name ("blast-off", "Blast-Off") to its canonical form"""
        if not name or not isinstance(name, str):
            raise ValidationError("exercise name cannot be empty")
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        for exercise in EXERCISES:
            if exercise.lower() == key:
                return exercise
        raise ValidationError(
            f"Unknown exercise: {name}. Must be one of {', '.join(EXERCISES)}"
        )

    @staticmethod
    def parse_int_list(value: str, field_name: str) -> List[int]:
        """Parse "11,13,10" into [11, 13, 10] (all positive)"""
        if not value or not value.strip():
            raise ValidationError(f"{field_name} cannot be empty")
        try:
            items = [int(v) for v in value.split(",")]
        except ValueError:
            raise ValidationError(f"{field_name} must be a comma-separated list of integers: {value}")
        for item in items:
            if item < 1:
                raise ValidationError(f"{field_name} entries must be positive: {value}")
        return items

    @staticmethod
    def validate_subject_counts(counts: List[int], n_subjects: int, field_name: str) -> List[int]:
        if len(counts) == 1:
            return counts * n_subjects
        if len(counts) != n_subjects:
            raise ValidationError(
                f"{field_name} lists {len(counts)} counts but --subjects is {n_subjects}"
            )
        return counts

    @staticmethod
    def parse_protocol(value: str) -> Tuple[str, Any]:
        """Parse a protocol string into ("holdout", (train, test)) or ("random", n_train)"""
        if not value:
            raise ValidationError("protocol cannot be empty")
        value = value.strip().lower()

        match = InputValidator.HOLDOUT_PATTERN.match(value)
        if match:
            train = {int(s) for s in match.group(1).split(",")}
            test = {int(s) for s in match.group(2).split(",")}
            if train & test:
                raise ValidationError(
                    f"holdout train and test subjects overlap: {sorted(train & test)}"
                )
            return "holdout", (train, test)

        match = InputValidator.RANDOM_PATTERN.match(value)
        if match:
            n_train = int(match.group(1))
            if n_train < 1:
                raise ValidationError("random protocol needs at least one training sample")
            return "random", n_train

        raise ValidationError(
            f"Invalid protocol: {value}. Expected 'holdout:3,4,5/1,2' or 'random:80'"
        )


class ConfigValidator:
    """Configuration validation utilities"""

    @staticmethod
    def validate_database_url(database_url: str) -> str:
        """Validate database URL format"""
        if not database_url:
            raise ValidationError("Database URL cannot be empty")

        if not isinstance(database_url, str):
            raise ValidationError("Database URL must be a string")

        database_url = database_url.strip()

        valid_schemes = ['sqlite:///', 'postgresql://', 'mysql://']
        if not any(database_url.startswith(scheme) for scheme in valid_schemes):
            raise ValidationError(
                f"Invalid database URL scheme. Must start with: {', '.join(valid_schemes)}"
            )

        return database_url

    @staticmethod
    def build_config(config_type, **values):
        """Instantiate a pydantic config, reporting invalid values as ValidationError"""
        from pydantic import ValidationError as PydanticValidationError

        try:
            return config_type(**values)
        except PydanticValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or config_type.__name__}: {err['msg']}"
                for err in e.errors()
            )
            raise ValidationError(f"invalid {config_type.__name__}: {problems}")
