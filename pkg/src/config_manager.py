"""
Configuration Manager for Hyperharmonics

Handles loading configuration from YAML files, a .env file and environment
variables, and provides a unified interface for accessing settings.
"""

import os
import yaml
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union
from dotenv import load_dotenv

from src.exceptions import ConfigurationError


@dataclass(frozen=True)
class VerifySettings:
    """Numerical knobs of the acceptance suite."""
    seed: int = 20240101
    step: float = 1e-3
    richardson: bool = True
    ode_tolerance: float = 1e-6
    helmholtz_tolerance: float = 1e-4
    helmholtz_points: int = 50
    grid_margin: float = 0.3
    grid_points: int = 50
    coords_points: int = 1000
    dims: Tuple[int, int] = (2, 8)


def parse_dims(value: Union[str, int, Tuple[int, int]]) -> Tuple[int, int]:
    """Parse a dimension range such as ``"2..8"`` or a single ``5``."""
    if isinstance(value, (tuple, list)) and len(value) == 2:
        low, high = int(value[0]), int(value[1])
    elif isinstance(value, int):
        low = high = value
    else:
        text = str(value).strip()
        try:
            if '..' in text:
                low_text, high_text = text.split('..', 1)
                low, high = int(low_text), int(high_text)
            else:
                low = high = int(text)
        except ValueError:
            raise ConfigurationError(f"Invalid dimension range: {value!r} (expected A..B)")
    if low < 2 or high < low:
        raise ConfigurationError(f"Invalid dimension range: {low}..{high}")
    return low, high


class ConfigManager:
    """Manages configuration loading and access for hyperharmonics."""

    env_mappings = {
        'HYPERHARM_LOG_LEVEL': 'logging.level',
        'HYPERHARM_LOG_FORMAT': 'logging.format',
        'HYPERHARM_FD_STEP': 'finite_difference.step',
        'HYPERHARM_FD_RICHARDSON': 'finite_difference.richardson',
        'HYPERHARM_VERIFY_SEED': 'verify.seed',
        'HYPERHARM_ODE_TOLERANCE': 'verify.ode_tolerance',
        'HYPERHARM_HELMHOLTZ_TOLERANCE': 'verify.helmholtz_tolerance',
        'HYPERHARM_TABLE_COUNT': 'table.count',
    }

    def __init__(self, config_dir: Optional[str] = None):
        """Initialize configuration manager.

        Args:
            config_dir: Directory containing config files. Defaults to ../config
        """
        self.logger = logging.getLogger(__name__)

        if config_dir is None:
            current_dir = os.path.dirname(os.path.abspath(__file__))
            config_dir = os.path.join(current_dir, '..', 'config')

        self.config_dir = config_dir
        self.config_data: Dict[str, Any] = {}

        # Config files first, then env vars override
        self._load_config_files()
        self._load_environment()

    def _load_environment(self) -> None:
        """Load a .env file next to the config directory and map environment variables."""
        env_file = os.path.join(os.path.dirname(os.path.abspath(self.config_dir)), '.env')
        if os.path.exists(env_file):
            load_dotenv(env_file)
            self.logger.info(f"Loaded environment from: {env_file}")

        for env_var, config_key in self.env_mappings.items():
            value = os.getenv(env_var)
            if value is not None:
                self._set_nested_key(self.config_data, config_key, self._convert_value(value))

    def _load_config_files(self) -> None:
        """Load configuration from YAML files."""
        for config_file in ('default.yml', 'config.yml', 'local.yml'):
            config_path = os.path.join(self.config_dir, config_file)
            if not os.path.exists(config_path):
                continue
            try:
                with open(config_path, 'r') as f:
                    file_config = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Malformed config file {config_path}: {e}")
            if file_config:
                if not isinstance(file_config, dict):
                    raise ConfigurationError(f"Config file {config_path} must contain a mapping")
                self._merge_config(self.config_data, file_config)
                self.logger.info(f"Loaded config from: {config_path}")

    def _convert_value(self, value: str) -> Union[str, int, float, bool]:
        """Convert string value to appropriate Python type."""
        if not isinstance(value, str):
            return value

        try:
            return int(value)
        except ValueError:
            pass
        try:
            return float(value)
        except ValueError:
            pass

        if value.lower() in ('true', 'yes', 'on'):
            return True
        if value.lower() in ('false', 'no', 'off'):
            return False
        return value

    def _set_nested_key(self, data: Dict[str, Any], key: str, value: Any) -> None:
        """Set a nested key in a dictionary using dot notation."""
        keys = key.split('.')
        current = data
        for k in keys[:-1]:
            if not isinstance(current.get(k), dict):
                current[k] = {}
            current = current[k]
        current[keys[-1]] = value

    def _get_nested_key(self, data: Dict[str, Any], key: str, default: Any = None) -> Any:
        """Get a nested key from a dictionary using dot notation."""
        current = data
        try:
            for k in key.split('.'):
                current = current[k]
            return current
        except (KeyError, TypeError):
            return default

    def _merge_config(self, base: Dict[str, Any], override: Dict[str, Any]) -> None:
        """Recursively merge configuration dictionaries."""
        for key, value in override.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._merge_config(base[key], value)
            else:
                base[key] = value

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value using dot notation.

        Args:
            key: Configuration key in dot notation (e.g., 'verify.seed')
            default: Default value if key is not found

        Returns:
            Configuration value or default
        """
        return self._get_nested_key(self.config_data, key, default)

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value using dot notation."""
        self._set_nested_key(self.config_data, key, value)

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get an entire configuration section."""
        return self.get(section, {})

    def validate_required(self, required_keys: list) -> None:
        """Validate that required configuration keys are present.

        Raises:
            ConfigurationError: If any required key is missing
        """
        missing_keys = [key for key in required_keys if self.get(key) is None]
        if missing_keys:
            raise ConfigurationError(f"Missing required configuration keys: {missing_keys}")

    def _typed(self, key: str, kind: type, default: Any) -> Any:
        value = self.get(key, default)
        if kind is bool:
            if isinstance(value, str):
                value = self._convert_value(value)
            if not isinstance(value, bool):
                raise ConfigurationError(f"{key} must be a boolean, got {value!r}")
            return value
        try:
            return kind(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f"{key} must be {kind.__name__}, got {value!r}")

    def verify_settings(self) -> VerifySettings:
        """Build the typed acceptance-suite settings from the loaded configuration.

        Raises:
            ConfigurationError: If a value has the wrong type or is out of range
        """
        defaults = VerifySettings()
        settings = VerifySettings(
            seed=self._typed('verify.seed', int, defaults.seed),
            step=self._typed('finite_difference.step', float, defaults.step),
            richardson=self._typed('finite_difference.richardson', bool, defaults.richardson),
            ode_tolerance=self._typed('verify.ode_tolerance', float, defaults.ode_tolerance),
            helmholtz_tolerance=self._typed('verify.helmholtz_tolerance', float,
                                            defaults.helmholtz_tolerance),
            helmholtz_points=self._typed('verify.helmholtz_points', int, defaults.helmholtz_points),
            grid_margin=self._typed('verify.grid_margin', float, defaults.grid_margin),
            grid_points=self._typed('verify.grid_points', int, defaults.grid_points),
            coords_points=self._typed('verify.coords_points', int, defaults.coords_points),
            dims=parse_dims(self.get('verify.dims', defaults.dims)),
        )
        if settings.step <= 0:
            raise ConfigurationError(f"finite_difference.step must be positive, got {settings.step}")
        if not 0 < settings.grid_margin < 1.5:
            raise ConfigurationError(f"verify.grid_margin out of range: {settings.grid_margin}")
        if settings.grid_points < 2 or settings.coords_points < 1 or settings.helmholtz_points < 1:
            raise ConfigurationError("verify point counts must be positive (grid_points >= 2)")
        return settings

    def to_dict(self) -> Dict[str, Any]:
        """Return the entire configuration as a dictionary."""
        return self.config_data.copy()
