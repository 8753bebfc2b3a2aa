# logger_config.py
import logging
from logging.handlers import RotatingFileHandler
from src.config import LOG_FILE, LOGGER_NAME, LOG_LEVEL

MAX_LOG_SIZE = 5 * 1024 * 1024 # 5MB
BACKUP_COUNT = 3
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(processName)s - %(message)s"

file_handler = RotatingFileHandler(
    LOG_FILE, maxBytes=MAX_LOG_SIZE, backupCount=BACKUP_COUNT, encoding='utf-8', delay=True
)
console_handler = logging.StreamHandler()

formatter = logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
for handler in (file_handler, console_handler):
    handler.setFormatter(formatter)

logger = logging.getLogger(LOGGER_NAME)
if not logger.handlers:
    logger.addHandler(file_handler)
    logger.addHandler(console_handler)
logger.propagate = False
logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))


def set_log_level(level):
    """Change the benchmark log level at runtime ('DEBUG', 'INFO', ...)."""
    resolved = getattr(logging, str(level).upper(), None)
    if not isinstance(resolved, int):
        raise ValueError(f"unknown log level {level!r}")
    logger.setLevel(resolved)
    return resolved
# End of logger_config.py
