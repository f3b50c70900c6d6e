"""
Event logging system using Python's logging module.
"""
import logging
import os
from datetime import datetime
from typing import Any, Dict

LOGGER_NAME = 'qutrit_dephasing'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class EventLogger:
    """Owns the application logger; library modules log through its child loggers"""

    def __init__(self, log_config: Dict[str, Any]):
        """
        Initialize event logger

        Args:
            log_config: Logging configuration dictionary. Keys: log_level, log_directory
                (no file handler when absent or None), log_filename
        """
        self.config = log_config
        level_name = str(log_config.get('log_level', 'INFO')).upper()
        self.log_level = getattr(logging, level_name, logging.INFO)
        self.session_id = datetime.now().strftime('%Y%m%d_%H%M%S')
        self.log_file = None

        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(self.log_level)

        # Clear existing handlers
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers.clear()

        # Console handler
        console_handler = logging.StreamHandler()
        console_handler.setLevel(self.log_level)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        self.logger.addHandler(console_handler)

        # File handler
        log_dir = log_config.get('log_directory')
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            log_filename = log_config.get('log_filename', 'dephasing_run.log')
            self.log_file = os.path.join(log_dir, f'{self.session_id}_{log_filename}')
            file_handler = logging.FileHandler(self.log_file)
            file_handler.setLevel(self.log_level)
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
            self.logger.addHandler(file_handler)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def debug(self, message: str):
        self.logger.debug(message)

    def log_run_start(self, config: Dict[str, Any]):
        """Log the subcommand and the configuration summary of a run"""
        self.info(f"Run starting: {config.get('subcommand', 'unknown')}")
        for key, value in config.items():
            if key != 'subcommand':
                self.info(f"{key}: {value}")

    def log_output(self, kind: str, path: str):
        self.info(f"Wrote {kind}: {path}")

    def log_validation(self, name: str, passed: bool, metric: float, threshold: float, gating: bool = True):
        status = 'PASS' if passed else ('FAIL' if gating else 'INFO')
        message = f"Validation {name}: {status} (metric {metric:.3e}, threshold {threshold:.1e})"
        if passed or not gating:
            self.info(message)
        else:
            self.warning(message)

    def log_error(self, component: str, error: str):
        self.error(f"{component} error: {error}")

    def close(self):
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers.clear()
