"""
Application configuration and settings
"""

import os
from typing import Dict, Any

from .validators import AppConfigValidator


class Settings:
    """Application settings with environment-based configuration"""

    def __init__(self):
        # Load environment variables
        try:
            from dotenv import load_dotenv
            load_dotenv()
        except ImportError:
            pass

        # Core settings
        self.APP_ENV = AppConfigValidator.validate_environment()["APP_ENV"]
        self.DEBUG = self.APP_ENV == "development"
        self.LOG_LEVEL = AppConfigValidator.validate_log_level()

        # Reproducibility: every random stream derives from this seed
        self.DEFAULT_SEED = self._get_int("LAMQ_SEED", 42)
        self.WORKERS = max(1, self._get_int("LAMQ_WORKERS", os.cpu_count() or 1))

        # Run history database
        database = AppConfigValidator.validate_database_config()
        self.DATABASE_URL = database.get("DATABASE_URL", "sqlite:///lamq_history.db")

        # Feature flags
        self.FEATURES = AppConfigValidator.validate_feature_flags()

    def _get_feature_flag(self, env_var: str, default: bool = False) -> bool:
        """Get feature flag from environment variable"""
        return os.getenv(env_var, str(default)).lower() in ("true", "1", "yes", "on")

    def _get_int(self, env_var: str, default: int) -> int:
        raw = os.getenv(env_var)
        if raw is None or not raw.strip():
            return default
        try:
            return int(raw.strip())
        except ValueError:
            from core.exceptions import ConfigurationError
            raise ConfigurationError(f"{env_var} must be an integer, got {raw!r}")

    def get_database_config(self) -> Dict[str, Any]:
        """Get database configuration"""
        return {
            "url": self.DATABASE_URL,
            "pool_pre_ping": True,
            "echo": self.LOG_LEVEL == "DEBUG",
        }

    def workers_for_reproduce(self) -> int:
        """Worker processes for the reproduction grid (1 when the feature is off)"""
        if not self.FEATURES.get("parallel_reproduce", False):
            return 1
        return self.WORKERS
