"""
Structured logging system for the exercise quality toolkit
"""

import logging
import json
from datetime import datetime, timezone
from typing import Optional


class QualityLogger:
    """Structured logger for pipeline operations"""

    def __init__(self, name: str = "exercise_quality"):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.INFO)

        # Create formatter
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        # Add console handler if not already present
        if not self.logger.handlers:
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

    def set_level(self, level: str) -> None:
        self.logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    def _log_structured(self, level: str, message: str, **kwargs):
        """Log structured data with additional context"""
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": level,
            "message": message,
            **kwargs
        }

        if level.upper() == "ERROR":
            self.logger.error(json.dumps(log_data, default=str))
        elif level.upper() == "WARNING":
            self.logger.warning(json.dumps(log_data, default=str))
        elif level.upper() == "INFO":
            self.logger.info(json.dumps(log_data, default=str))
        else:
            self.logger.debug(json.dumps(log_data, default=str))

    def log_stage_start(self, stage: str, **kwargs):
        """Log the start of a pipeline stage"""
        self._log_structured(
            "INFO",
            f"Stage {stage} started",
            operation="stage_start",
            stage=stage,
            **kwargs
        )

    def log_stage_complete(self, stage: str, duration_seconds: float, **kwargs):
        """Log the completion of a pipeline stage"""
        self._log_structured(
            "INFO",
            f"Stage {stage} completed",
            operation="stage_complete",
            stage=stage,
            duration_seconds=round(duration_seconds, 4),
            **kwargs
        )

    def log_stage_error(self, stage: str, error: Exception, **kwargs):
        """Log stage errors"""
        self._log_structured(
            "ERROR",
            f"Stage {stage} failed: {error}",
            operation="stage_error",
            stage=stage,
            error_type=type(error).__name__,
            error_message=str(error),
            **kwargs
        )

    def log_training(self, family: str, representation: str, n_samples: int,
                     duration_seconds: float, **kwargs):
        """Log a finished model fit"""
        self._log_structured(
            "DEBUG",
            f"Trained {family} on {representation}",
            operation="train",
            family=family,
            representation=representation,
            n_samples=n_samples,
            duration_seconds=round(duration_seconds, 4),
            **kwargs
        )

    def log_protocol_complete(self, protocol: str, family: str, representation: str,
                              n_runs: int, mean_accuracy: float, duration_seconds: float):
        """Log an evaluation protocol summary"""
        self._log_structured(
            "INFO",
            f"Protocol {protocol} finished for {family}/{representation}",
            operation="protocol_complete",
            protocol=protocol,
            family=family,
            representation=representation,
            n_runs=n_runs,
            mean_accuracy=mean_accuracy,
            duration_seconds=round(duration_seconds, 4),
        )

    def log_database_operation(self, operation: str, table: str, success: bool,
                               error: Optional[Exception] = None):
        """Log database operations"""
        level = "INFO" if success else "ERROR"
        message = f"Database {operation} on {table} {'succeeded' if success else 'failed'}"

        log_data = {
            "operation": f"db_{operation}",
            "table": table,
            "success": success
        }

        if error:
            log_data.update({
                "error_type": type(error).__name__,
                "error_message": str(error)
            })

        self._log_structured(level, message, **log_data)

    def log_system_event(self, event: str, **kwargs):
        """Log system events"""
        self._log_structured(
            "INFO",
            f"System event: {event}",
            operation="system_event",
            event=event,
            **kwargs
        )


# Global logger instance
logger = QualityLogger()
