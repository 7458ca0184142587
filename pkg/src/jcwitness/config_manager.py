"""
Configuration Manager Module

Run defaults for sweeps and figure reproduction: physical parameters, time
grid, optimizer controls, series truncation, output format and logging.
Values come from built-in defaults, a YAML file (./config.yaml unless another
is given) and environment variables (JCW_ prefix, optionally from a .env
file), in that order.
"""

import copy
import logging
import os
from typing import Any, Dict, Optional

import yaml
from dotenv import find_dotenv, load_dotenv

from src.jcwitness.detect import OptimizerSettings

logger = logging.getLogger(__name__)


class ConfigManager:
    """
    Manages run configuration.

    Supports loading configuration from YAML files and environment variables.
    """

    DEFAULT_CONFIG = {
        'physics': {
            'g': 1.0,
            'delta': 1.0,
            'gamma': 0.0,
            'lambda': 0.0,
            'n': 1,
            'omega_f': 1.0,
        },
        'grid': {
            't_min': 0.0,
            't_max': 6.0,
            't_steps': 200,
            'lambda_steps': 11,
        },
        'optimizer': {
            'restarts': 32,
            'seed': 0,
            'xatol': 1e-9,
            'fatol': 1e-12,
            'max_evals_per_start': 2000,
            'polish': False,
            'workers': 1,
        },
        'series': {
            'fock_cut': None,
            'k_max': 60,
        },
        'output': {
            'format': 'csv',
            'precision': 12,
        },
        'logging': {
            'level': 'WARNING',
            'file': None,
        },
    }

    # Read from the working directory when no file is given.
    DEFAULT_CONFIG_FILE = 'config.yaml'

    # env var -> (dot path, parser)
    ENV_VARS = {
        'JCW_RESTARTS': ('optimizer.restarts', int),
        'JCW_SEED': ('optimizer.seed', int),
        'JCW_WORKERS': ('optimizer.workers', int),
        'JCW_OUTPUT_FORMAT': ('output.format', str),
        'JCW_LOG_LEVEL': ('logging.level', str),
    }

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize the configuration manager.

        Args:
            config_file: Path to YAML configuration file (optional; falls back to
                ./config.yaml when that file exists)
        """
        if config_file is None and os.path.exists(self.DEFAULT_CONFIG_FILE):
            config_file = self.DEFAULT_CONFIG_FILE
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config_file = config_file

        if config_file and os.path.exists(config_file):
            self.load_from_file(config_file)

        self.load_from_env()

    def load_from_file(self, filepath: str) -> bool:
        """
        Load configuration from a YAML file.

        Args:
            filepath: Path to the YAML configuration file

        Returns:
            bool: True if successful, False otherwise
        """
        try:
            with open(filepath, 'r') as f:
                file_config = yaml.safe_load(f)
                if file_config:
                    self._merge_config(file_config)
            logger.info(f"Loaded configuration from {filepath}")
            return True
        except Exception as e:
            logger.error(f"Error loading config file: {e}")
            return False

    def load_from_env(self):
        """
        Load configuration from environment variables.

        A .env file in the working directory is read first (existing variables win).
        Example: JCW_RESTARTS=64, JCW_LOG_LEVEL=DEBUG
        """
        load_dotenv(find_dotenv(usecwd=True), override=False)
        for name, (key_path, parser) in self.ENV_VARS.items():
            if name not in os.environ:
                continue
            try:
                self.set(key_path, parser(os.environ[name]))
            except ValueError:
                logger.warning(f"Ignoring {name}={os.environ[name]!r}: not a valid {parser.__name__}")

    def _merge_config(self, new_config: Dict):
        """
        Merge new configuration with existing configuration.

        Args:
            new_config: New configuration dictionary to merge
        """
        for key, value in new_config.items():
            if key in self.config and isinstance(value, dict):
                self.config[key].update(value)
            else:
                self.config[key] = value

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Args:
            key_path: Configuration key path (e.g., 'optimizer.restarts')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value = self.config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any):
        """
        Set a configuration value using dot notation.

        Args:
            key_path: Configuration key path (e.g., 'optimizer.restarts')
            value: Value to set
        """
        keys = key_path.split('.')
        config = self.config
        for key in keys[:-1]:
            if key not in config:
                config[key] = {}
            config = config[key]
        config[keys[-1]] = value

    def get_all(self) -> Dict:
        """Deep copy of the complete configuration."""
        return copy.deepcopy(self.config)

    def optimizer_settings(self) -> OptimizerSettings:
        """OptimizerSettings built from the optimizer section (workers is not an optimizer field)."""
        section = {k: v for k, v in self.config['optimizer'].items() if k != 'workers'}
        return OptimizerSettings(**section)

    def save_to_file(self, filepath: str) -> bool:
        """
        Save current configuration to a YAML file.

        Args:
            filepath: Path where to save the configuration

        Returns:
            bool: True if successful, False otherwise
        """
        try:
            with open(filepath, 'w') as f:
                yaml.dump(self.config, f, default_flow_style=False)
            return True
        except Exception as e:
            logger.error(f"Error saving config file: {e}")
            return False


__all__ = ['ConfigManager']
