"""
Configuration Manager for HOObs
Handles loading and managing tool settings from a JSON file
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from automata.errors import ValidationError

STATE_CAP_ENV = "HOOBS_STATE_CAP"
DEFAULT_STATE_CAP = 1_000_000


class OracleSettings:
    """Settings for the brute-force oracle"""

    def __init__(self, config_data: Dict[str, Any]):
        self.data = config_data

    @property
    def max_trace_len(self) -> int:
        """Get the trace length bound"""
        return int(self.data.get('max_trace_len', 8))

    @property
    def stabilization_window(self) -> int:
        """Get the number of smaller bounds compared for stabilization"""
        return int(self.data.get('stabilization_window', 2))

    @property
    def max_traces(self) -> int:
        """Get the size guard on enumerated traces"""
        return int(self.data.get('max_traces', 200000))


class DotSettings:
    """Settings for Graphviz export"""

    def __init__(self, config_data: Dict[str, Any]):
        self.data = config_data

    @property
    def rankdir(self) -> str:
        return self.data.get('rankdir', 'LR')

    @property
    def node_shape(self) -> str:
        return self.data.get('node_shape', 'box')

    @property
    def secret_color(self) -> str:
        return self.data.get('secret_color', 'red')


class ConfigManager:
    """Manages tool settings"""

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = config_dir or os.path.dirname(os.path.abspath(__file__))
        self.config_file = os.path.join(self.config_dir, "hoobs_config.json")
        self.global_settings: Dict[str, Any] = {}
        self.sections: Dict[str, Dict[str, Any]] = {}

        # Load configuration
        self.load_config()

    def load_config(self) -> bool:
        """Load configuration from JSON file"""
        try:
            if not os.path.exists(self.config_file):
                logging.warning(f"Configuration file not found: {self.config_file}")
                return False

            with open(self.config_file, 'r', encoding='utf-8') as f:
                config_data = json.load(f)

            self.global_settings = config_data.get('global_settings', {})
            self.sections = {key: value for key, value in config_data.items()
                             if key != 'global_settings' and isinstance(value, dict)}

            logging.debug(f"Configuration loaded from {self.config_file}")
            return True

        except Exception as e:
            logging.error(f"Error loading configuration: {e}")
            return False

    def get_global_setting(self, key: str, default: Any = None) -> Any:
        """Get a global setting value"""
        return self.global_settings.get(key, default)

    def get_section(self, name: str) -> Dict[str, Any]:
        """Get a named settings section"""
        return self.sections.get(name, {})

    def get_state_cap(self) -> int:
        """
        Get the nested-state cap

        The HOOBS_STATE_CAP environment variable takes precedence over the file.

        Raises:
            ValidationError: If the configured value is not a positive integer
        """
        raw = os.environ.get(STATE_CAP_ENV)
        source = STATE_CAP_ENV
        if raw is None or raw.strip() == "":
            raw = self.global_settings.get('state_cap', DEFAULT_STATE_CAP)
            source = "state_cap"
        try:
            cap = int(raw)
        except (TypeError, ValueError):
            raise ValidationError(f"{source} must be an integer, got {raw!r}") from None
        if cap <= 0:
            raise ValidationError(f"{source} must be positive, got {cap}")
        return cap

    def get_oracle_settings(self) -> OracleSettings:
        return OracleSettings(self.get_section('oracle'))

    def get_dot_settings(self) -> DotSettings:
        return DotSettings(self.get_section('dot'))

    def get_default_stage(self) -> str:
        return self.get_section('verification').get('default_stage', 'auto')

    def is_lazy_order1(self) -> bool:
        return bool(self.get_section('verification').get('lazy_order1', True))


# Global configuration manager instance
config_manager = ConfigManager()


def resolve_state_cap(cap: Optional[int] = None) -> int:
    """Return `cap` when given, else the configured cap"""
    if cap is not None:
        if cap <= 0:
            raise ValidationError(f"State cap must be positive, got {cap}")
        return cap
    return config_manager.get_state_cap()
