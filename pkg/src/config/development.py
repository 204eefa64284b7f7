"""
Development environment configuration
"""

import os

from .settings import Settings


class DevelopmentSettings(Settings):
    """Development-specific settings"""

    def __init__(self):
        super().__init__()

        # Override for development
        self.DEBUG = True

        # History stays in a local SQLite file unless a database is configured
        if not os.getenv("DATABASE_URL", "").strip():
            self.DATABASE_URL = "sqlite:///lamq_history.db"
