# utils/config_watcher.py
import os
import json
from src.errors import ConfigurationError
from src.logger_config import logger


class ConfigWatcher:
    """
    JSON config file reloaded on mtime change.

    Soft reads (`load_if_changed`, `method_param`) log failures and fall back
    to an empty config; `require` raises instead.
    """

    def __init__(self, filepath):
        self.filepath = filepath
        self.last_mtime = 0
        self.config = {}
        self.last_error = None

    def load_if_changed(self):
        try:
            current_mtime = os.path.getmtime(self.filepath)
            if current_mtime != self.last_mtime:
                with open(self.filepath, "r", encoding="utf-8") as f:
                    loaded = json.load(f)
                if not isinstance(loaded, dict):
                    raise ValueError(f"top level must be an object, got {type(loaded).__name__}")
                self.config = loaded
                self.last_mtime = current_mtime
                self.last_error = None
                logger.info(f"[CONFIG 0101:10] :: Reloaded {self.filepath}")
        except (OSError, ValueError) as e:
            logger.error(f"[CONFIG 0101:20] :: Failed to load {self.filepath}: {e}")
            self.config = {}
            self.last_mtime = 0
            self.last_error = str(e)
        return self.config

    def require(self):
        """Current config, or ConfigurationError when the file cannot be read."""
        config = self.load_if_changed()
        if self.last_error:
            raise ConfigurationError(f"cannot read config {self.filepath}: {self.last_error}")
        return config

    def method_param(self, method, key, fallback=None):
        """`method_overrides[method][key]`, then `defaults[key]`, then fallback."""
        self.load_if_changed()
        overrides = self.config.get("method_overrides", {}).get(method or "", {})
        if isinstance(overrides, dict) and key in overrides:
            return overrides[key]
        return self.config.get("defaults", {}).get(key, fallback)
