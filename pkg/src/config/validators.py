"""
Configuration validation for the exercise quality toolkit
"""

import os
from typing import Dict, Any

from core.exceptions import ConfigurationError, ValidationError
from core.validators import ConfigValidator

VALID_ENVIRONMENTS = ("development", "staging", "production")
VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class AppConfigValidator:
    """Application configuration validation"""

    @staticmethod
    def validate_environment() -> Dict[str, Any]:
        """Validate the application environment configuration"""
        app_env = os.getenv("APP_ENV", "development").strip().lower()

        if app_env not in VALID_ENVIRONMENTS:
            raise ConfigurationError(
                f"Invalid APP_ENV: {app_env}. Must be 'development', 'staging', or 'production'"
            )

        return {
            "APP_ENV": app_env,
            "DEBUG": app_env == "development",
        }

    @staticmethod
    def validate_log_level() -> str:
        level = os.getenv("LOG_LEVEL", "INFO").strip().upper()
        if level not in VALID_LOG_LEVELS:
            raise ConfigurationError(
                f"Invalid LOG_LEVEL: {level}. Must be one of {', '.join(VALID_LOG_LEVELS)}"
            )
        return level

    @staticmethod
    def validate_database_config() -> Dict[str, str]:
        """Validate the run history database URL if one is configured"""
        database_url = os.getenv("DATABASE_URL")
        if not database_url:
            return {}
        try:
            return {"DATABASE_URL": ConfigValidator.validate_database_url(database_url)}
        except ValidationError as e:
            raise ConfigurationError(f"Database configuration validation failed: {e}")

    @staticmethod
    def validate_feature_flags() -> Dict[str, bool]:
        """Validate feature flags configuration"""
        default_flags = {
            "run_history": False,
            "parallel_reproduce": True,
        }

        feature_flags = {}
        for flag_name, default in default_flags.items():
            env_value = os.getenv(f"FEATURE_{flag_name.upper()}")

            if env_value is None:
                feature_flags[flag_name] = default
            elif env_value.lower() in ["true", "1", "yes", "on"]:
                feature_flags[flag_name] = True
            elif env_value.lower() in ["false", "0", "no", "off"]:
                feature_flags[flag_name] = False
            else:
                raise ConfigurationError(
                    f"Invalid feature flag value for {flag_name}: {env_value}. "
                    "Must be 'true' or 'false'"
                )

        return feature_flags
