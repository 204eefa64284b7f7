"""
Configuration factory for loading environment-specific settings
"""

from .settings import Settings
from .validators import AppConfigValidator


def get_settings() -> Settings:
    """
    Factory function to get the appropriate settings based on environment
    """
    app_env = AppConfigValidator.validate_environment()["APP_ENV"]

    if app_env == "production":
        from .production import ProductionSettings
        return ProductionSettings()
    elif app_env == "staging":
        return Settings()
    else:
        from .development import DevelopmentSettings
        return DevelopmentSettings()


# Global settings instance
settings = get_settings()
