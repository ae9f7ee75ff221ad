"""
Configuration module for hypocalc.
Handles loading and validation of configuration from config.yaml
"""

import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import yaml

SUBCOMMANDS = ('classify', 'scan', 'solve', 'counterexample', 'decay', 'microlocal')
OUTPUT_FORMATS = ('json', 'csv')


class ConfigManager:
    """Manages configuration loading and access for hypocalc."""

    def __init__(self, config_path: str = "config.yaml"):
        """
        Initialize configuration manager.

        Parameters:
        -----------
        config_path : str
            Path to the configuration YAML file (relative or absolute)
        """
        self._config = None
        path = Path(config_path)
        self.use(str(path if path.is_absolute() else Path(__file__).parent.resolve() / path))

    def use(self, config_path: str) -> None:
        """Point the manager at another YAML file and load it."""
        # relative paths: working directory first, then this file's directory
        config_path_obj = Path(config_path)
        if not config_path_obj.is_absolute() and not config_path_obj.exists():
            this_file_dir = Path(__file__).parent.resolve()
            self.config_path = this_file_dir / config_path_obj
        else:
            self.config_path = config_path_obj
        self.reload_config()

    def load_config(self) -> None:
        """Load configuration from YAML file with error handling."""
        try:
            if self.config_path.exists():
                with open(self.config_path, 'r', encoding='utf-8') as file:
                    self._config = yaml.safe_load(file) or {}
                logging.debug(f"Configuration loaded from {self.config_path}")
            else:
                logging.warning(f"Configuration file {self.config_path} not found. Using defaults.")
                self._config = self._get_default_config()
        except yaml.YAMLError as e:
            logging.warning(f"Error parsing YAML configuration: {e}. Using default configuration.")
            self._config = self._get_default_config()
        except Exception as e:
            logging.warning(f"Error loading configuration: {e}. Using default configuration.")
            self._config = self._get_default_config()

    def _get_default_config(self) -> Dict[str, Any]:
        """Return default configuration if file is not available."""
        return {
            'spectral': {
                't_window': 32,
                'phase_guard': 24,
                'max_t_window': 512,
                'roundtrip_tolerance': 1e-12
            },
            'diophantine': {
                'xi_max': 256,
                'witness_depth': 4,
                'precision_start_bits': 64,
                'precision_cap_bits': 1024
            },
            'solver': {
                'divisor_floor': 1e-8,
                'residual_tolerance': 1e-8,
                'rapid_threshold': 4,
                'fit_residual_tolerance': 0.15
            },
            'microlocal': {
                'window': 64,
                'fan_resolution': 8,
                'k_max': 8,
                'fit_tolerance': 0.5,
                'x_grid': 8
            },
            'cli': {
                'output_format': 'json',
                'output_dir': 'reports',
                'seed': 20261018,
                'workers_env': 'HYPOCALC_WORKERS'
            },
            'logging': {
                'level': 'INFO'
            }
        }

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation.

        Parameters:
        -----------
        key_path : str
            Dot-separated path to configuration value (e.g., 'solver.divisor_floor')
        default : Any
            Default value if key is not found

        Returns:
        --------
        Any : Configuration value or default
        """
        if self._config is None:
            return default

        keys = key_path.split('.')
        value = self._config

        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            logging.debug(f"Configuration key '{key_path}' not found. Using default: {default}")
            return default

    def set(self, key_path: str, value: Any) -> None:
        """Set a value in memory using dot notation; the YAML file is untouched."""
        if self._config is None:
            self._config = {}
        keys = key_path.split('.')
        node = self._config
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value

    @contextmanager
    def overrides(self, values: Dict[str, Any]) -> Iterator[None]:
        """Temporarily replace dot-path values, restoring the previous ones on exit."""
        missing = object()
        previous = {key: self.get(key, missing) for key in values}
        for key, value in values.items():
            self.set(key, value)
        try:
            yield
        finally:
            for key, old in previous.items():
                if old is missing:
                    section, _, leaf = key.rpartition('.')
                    node = self.get(section, {}) if section else self._config
                    if isinstance(node, dict):
                        node.pop(leaf, None)
                else:
                    self.set(key, old)

    def get_spectral_defaults(self) -> Dict[str, Any]:
        """Get the spectral window and tolerance settings."""
        return {
            't_window': self.get('spectral.t_window', 32),
            'phase_guard': self.get('spectral.phase_guard', 24),
            'max_t_window': self.get('spectral.max_t_window', 512),
            'roundtrip_tolerance': self.get('spectral.roundtrip_tolerance', 1e-12)
        }

    def get_diophantine_defaults(self) -> Dict[str, Any]:
        return {
            'xi_max': self.get('diophantine.xi_max', 256),
            'witness_depth': self.get('diophantine.witness_depth', 4),
            'precision_start_bits': self.get('diophantine.precision_start_bits', 64),
            'precision_cap_bits': self.get('diophantine.precision_cap_bits', 1024)
        }

    def get_solver_defaults(self) -> Dict[str, Any]:
        return {
            'divisor_floor': self.get('solver.divisor_floor', 1e-8),
            'residual_tolerance': self.get('solver.residual_tolerance', 1e-8),
            'rapid_threshold': self.get('solver.rapid_threshold', 4),
            'fit_residual_tolerance': self.get('solver.fit_residual_tolerance', 0.15)
        }

    def get_microlocal_defaults(self) -> Dict[str, Any]:
        return {
            'window': self.get('microlocal.window', 64),
            'fan_resolution': self.get('microlocal.fan_resolution', 8),
            'k_max': self.get('microlocal.k_max', 8),
            'fit_tolerance': self.get('microlocal.fit_tolerance', 0.5),
            'x_grid': self.get('microlocal.x_grid', 8)
        }

    def get_cli_defaults(self) -> Dict[str, Any]:
        """Get command-line defaults (output, seed, worker variable)."""
        return {
            'output_format': self.get('cli.output_format', 'json'),
            'output_dir': self.get('cli.output_dir', 'reports'),
            'seed': self.get('cli.seed', 20261018),
            'workers_env': self.get('cli.workers_env', 'HYPOCALC_WORKERS')
        }

    def get_logging_config(self) -> Dict[str, Any]:
        return {
            'level': str(self.get('logging.level', 'INFO')).upper()
        }

    def reload_config(self) -> None:
        """Reload configuration from file."""
        self.load_config()


@dataclass(frozen=True)
class RunConfig:
    """Validated flags of one command-line run."""

    command: str
    system_path: Optional[str]
    xi_max: int
    t_window: int
    divisor_floor: float
    fan_resolution: int
    k_max: float
    output_format: str
    output_dir: str
    seed: int
    workers: int = 1
    options: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_options(cls, command: str, manager: Optional[ConfigManager] = None, **options) -> 'RunConfig':
        """Fill unset flags from the configuration and validate all of them.

        Raises ValueError with a message suitable for the diagnostic stream.
        """
        manager = manager or config
        if command not in SUBCOMMANDS:
            raise ValueError(f"Unknown subcommand '{command}'; expected one of {', '.join(SUBCOMMANDS)}")

        def pick(name, key):
            value = options.pop(name, None)
            return manager.get(key) if value is None else value

        cli = manager.get_cli_defaults()
        xi_max = pick('xi_max', 'diophantine.xi_max')
        t_window = pick('t_window', 'spectral.t_window')
        divisor_floor = pick('divisor_floor', 'solver.divisor_floor')
        fan_resolution = pick('fan_resolution', 'microlocal.fan_resolution')
        k_max = pick('k_max', 'microlocal.k_max')
        output_format = options.pop('output_format', None) or cli['output_format']
        output_dir = options.pop('output_dir', None) or cli['output_dir']
        seed = options.pop('seed', None)
        seed = cli['seed'] if seed is None else seed
        system_path = options.pop('system_path', None)

        try:
            xi_max, t_window, fan_resolution, seed = int(xi_max), int(t_window), int(fan_resolution), int(seed)
            divisor_floor, k_max = float(divisor_floor), float(k_max)
        except (TypeError, ValueError) as e:
            raise ValueError(f"Invalid numeric flag: {e}") from e

        if xi_max < 1:
            raise ValueError(f"xi_max must be >= 1, got {xi_max}")
        if t_window < 1:
            raise ValueError(f"t_window must be >= 1, got {t_window}")
        if not 0 < divisor_floor < 1:
            raise ValueError(f"divisor_floor must lie in (0, 1), got {divisor_floor}")
        if fan_resolution < 2:
            raise ValueError(f"fan_resolution must be >= 2, got {fan_resolution}")
        if k_max <= 0:
            raise ValueError(f"k_max must be positive, got {k_max}")
        if output_format not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {', '.join(OUTPUT_FORMATS)}, got '{output_format}'")
        if system_path is not None and not Path(system_path).is_file():
            raise ValueError(f"System file '{system_path}' does not exist")

        workers = 1
        raw = os.environ.get(cli['workers_env'])
        if raw:
            try:
                workers = int(raw)
            except ValueError as e:
                raise ValueError(f"{cli['workers_env']} must be an integer, got '{raw}'") from e
            if workers < 1:
                raise ValueError(f"{cli['workers_env']} must be >= 1, got {workers}")

        return cls(command, system_path, xi_max, t_window, divisor_floor, fan_resolution, k_max,
                   output_format, str(output_dir), seed, workers, dict(options))


# Global configuration instance
config = ConfigManager()
