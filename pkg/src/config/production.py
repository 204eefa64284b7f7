"""
Production environment configuration
"""

import os

from .settings import Settings


class ProductionSettings(Settings):
    """Production-specific settings (batch experiment hosts)"""

    def __init__(self):
        super().__init__()

        # Override for production
        self.DEBUG = False
        if "LOG_LEVEL" not in os.environ:
            self.LOG_LEVEL = "WARNING"

        # Production hosts keep a history of every protocol run
        self.FEATURES.update({
            "run_history": self._get_feature_flag("FEATURE_RUN_HISTORY", True),
            "parallel_reproduce": True,
        })
