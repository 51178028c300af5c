"""Configuration utilities for the HIC pipeline"""

import os
import json
import yaml
from typing import Any, Dict, Optional, Union
from pathlib import Path
from dataclasses import dataclass, field, fields, asdict, is_dataclass
from configparser import ConfigParser

from .exceptions import ConfigurationError, FileError, ErrorCode
from .logging_utils import LogFormat


@dataclass
class PunctureConfig:
    """Puncturing configuration"""
    z_v: Optional[float] = None
    z_e: Optional[float] = None
    qubit_metric: str = 'readout'  # readout, sx or combined


@dataclass
class SearchConfig:
    """Cut search configuration"""
    max_expansions: int = 100_000
    oracle_max_actions: int = 5
    oracle_cap: int = 2_000_000


@dataclass
class SelectionConfig:
    """Candidate sweep configuration"""
    k_max: int = 4
    alpha: float = 1.0
    jobs: int = 1


@dataclass
class SimulationConfig:
    """Simulator configuration"""
    backend: str = 'exact'  # exact or noisy
    shots: int = 4096
    seed: int = 1234
    max_qubits: int = 14
    readout_flips: bool = True


@dataclass
class OutputConfig:
    """Report and logging output configuration"""
    output_dir: str = './hic-output'
    log_level: str = 'WARNING'
    log_format: str = 'structured'
    log_file: Optional[str] = None


@dataclass
class HICConfig:
    """Aggregated pipeline configuration"""
    puncture: PunctureConfig = field(default_factory=PunctureConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


_SECTIONS = {
    'puncture': PunctureConfig,
    'search': SearchConfig,
    'selection': SelectionConfig,
    'simulation': SimulationConfig,
    'output': OutputConfig,
}

_VALID_CHOICES = {
    'puncture.qubit_metric': ('readout', 'sx', 'combined'),
    'simulation.backend': ('exact', 'noisy'),
    'output.log_format': tuple(f.value for f in LogFormat),
    'output.log_level': ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'),
}


class ConfigUtils:
    """Utility class for configuration management"""

    @staticmethod
    def load_from_env() -> Dict[str, Any]:
        """Load configuration overrides from environment variables

        Only variables that are set produce entries, so the result can be
        merged over the defaults without masking them.

        Returns:
            Dict: Configuration dictionary
        """
        config: Dict[str, Any] = {}
        mapping = {
            'HIC_SEED': 'simulation.seed',
            'HIC_SHOTS': 'simulation.shots',
            'HIC_JOBS': 'selection.jobs',
            'HIC_LOG_LEVEL': 'output.log_level',
            'HIC_LOG_FORMAT': 'output.log_format',
            'HIC_LOG_FILE': 'output.log_file',
            'HIC_OUTPUT_DIR': 'output.output_dir',
        }
        for env_name, key_path in mapping.items():
            value = os.getenv(env_name)
            if value is not None and value != '':
                ConfigUtils.set_config_value(config, key_path, value)
        return config

    @staticmethod
    def load_from_file(file_path: Union[str, Path], file_format: str = 'auto') -> Dict[str, Any]:
        """Load configuration from file

        Args:
            file_path: Path to configuration file
            file_format: File format ('json', 'yaml', 'ini', or 'auto')

        Returns:
            Dict: Configuration dictionary
        """
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileError(
                f"Configuration file not found: {file_path}",
                ErrorCode.FILE_NOT_FOUND,
                filename=str(file_path)
            )

        if file_format == 'auto':
            extension = file_path.suffix.lower()
            if extension in ['.json']:
                file_format = 'json'
            elif extension in ['.yaml', '.yml']:
                file_format = 'yaml'
            elif extension in ['.ini', '.cfg']:
                file_format = 'ini'
            else:
                raise FileError(
                    f"Cannot auto-detect format for file: {file_path}",
                    ErrorCode.INVALID_FILE_TYPE,
                    filename=str(file_path)
                )

        with open(file_path, 'r', encoding='utf-8') as f:
            if file_format == 'json':
                return json.load(f)
            elif file_format == 'yaml':
                return yaml.safe_load(f) or {}
            elif file_format == 'ini':
                parser = ConfigParser()
                parser.read_file(f)
                return {section: dict(parser[section]) for section in parser.sections()}
            else:
                raise FileError(
                    f"Unsupported file format: {file_format}",
                    ErrorCode.INVALID_FILE_TYPE,
                    filename=str(file_path)
                )

    @staticmethod
    def merge_configs(*configs: Dict[str, Any]) -> Dict[str, Any]:
        """Merge multiple configuration dictionaries

        Later dictionaries win; None values never override.

        Args:
            *configs: Configuration dictionaries to merge

        Returns:
            Dict: Merged configuration
        """
        merged: Dict[str, Any] = {}

        for config in configs:
            for key, value in config.items():
                if value is None:
                    continue
                if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                    merged[key] = ConfigUtils.merge_configs(merged[key], value)
                else:
                    merged[key] = value

        return merged

    @staticmethod
    def get_config_value(config: Dict[str, Any], key_path: str, default: Any = None) -> Any:
        """Get configuration value using dot notation

        Args:
            config: Configuration dictionary
            key_path: Dot-separated key path (e.g., 'simulation.shots')
            default: Default value if key not found

        Returns:
            Any: Configuration value
        """
        value: Any = config
        try:
            for key in key_path.split('.'):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    @staticmethod
    def set_config_value(config: Dict[str, Any], key_path: str, value: Any) -> None:
        """Set configuration value using dot notation

        Args:
            config: Configuration dictionary
            key_path: Dot-separated key path (e.g., 'simulation.shots')
            value: Value to set
        """
        keys = key_path.split('.')
        current = config

        for key in keys[:-1]:
            if key not in current:
                current[key] = {}
            current = current[key]

        current[keys[-1]] = value

    @staticmethod
    def create_default_config() -> Dict[str, Any]:
        """Create default configuration

        Returns:
            Dict: Default configuration
        """
        return asdict(HICConfig())

    @staticmethod
    def build_config(*layers: Dict[str, Any]) -> HICConfig:
        """Merge layers over the defaults and coerce them into HICConfig

        Args:
            *layers: Configuration dictionaries in increasing precedence

        Returns:
            HICConfig: Typed configuration
        """
        merged = ConfigUtils.merge_configs(ConfigUtils.create_default_config(), *layers)
        sections = {}
        for name, section_cls in _SECTIONS.items():
            raw = merged.get(name, {})
            if not isinstance(raw, dict):
                raise ConfigurationError(name, "section must be a mapping")
            unknown = set(raw) - {f.name for f in fields(section_cls)}
            if unknown:
                raise ConfigurationError(f"{name}.{sorted(unknown)[0]}", "unknown setting")
            values = {}
            for f in fields(section_cls):
                key_path = f"{name}.{f.name}"
                try:
                    values[f.name] = _coerce(raw.get(f.name), f.type)
                except (TypeError, ValueError) as e:
                    raise ConfigurationError(key_path, str(e)) from e
                choices = _VALID_CHOICES.get(key_path)
                if choices and values[f.name] is not None:
                    candidate = values[f.name]
                    if key_path == 'output.log_level':
                        candidate = str(candidate).upper()
                        values[f.name] = candidate
                    if candidate not in choices:
                        raise ConfigurationError(key_path, f"must be one of {list(choices)}")
            sections[name] = section_cls(**values)

        config = HICConfig(**sections)
        ConfigUtils.validate_config(config)
        return config

    @staticmethod
    def validate_config(config: HICConfig) -> None:
        """Validate ranges of a typed configuration

        Args:
            config: Configuration to validate
        """
        checks = [
            ('simulation.shots', config.simulation.shots >= 1, "must be >= 1"),
            ('simulation.max_qubits', config.simulation.max_qubits >= 1, "must be >= 1"),
            ('selection.k_max', config.selection.k_max >= 1, "must be >= 1"),
            ('selection.jobs', config.selection.jobs != 0, "must be non-zero"),
            ('selection.alpha', 0.0 <= config.selection.alpha <= 1.0, "must lie in [0, 1]"),
            ('search.max_expansions', config.search.max_expansions >= 1, "must be >= 1"),
            ('search.oracle_cap', config.search.oracle_cap >= 1, "must be >= 1"),
        ]
        for z_name in ('z_v', 'z_e'):
            z_value = getattr(config.puncture, z_name)
            if z_value is not None:
                checks.append((f'puncture.{z_name}', z_value > 0, "must be > 0"))
        for setting, ok, message in checks:
            if not ok:
                raise ConfigurationError(setting, message)

    @staticmethod
    def load(config_file: Optional[Union[str, Path]] = None,
             overrides: Optional[Dict[str, Any]] = None) -> HICConfig:
        """Resolve configuration: defaults < environment < file < overrides

        Args:
            config_file: Optional INI/YAML/JSON file; falls back to HIC_CONFIG
            overrides: Values from command-line flags

        Returns:
            HICConfig: Typed configuration
        """
        layers = [ConfigUtils.load_from_env()]
        config_file = config_file or os.getenv('HIC_CONFIG')
        if config_file:
            layers.append(ConfigUtils.load_from_file(config_file))
        if overrides:
            layers.append(overrides)
        return ConfigUtils.build_config(*layers)

    @staticmethod
    def to_dict(config: HICConfig) -> Dict[str, Any]:
        """Plain dictionary view of a typed configuration"""
        return asdict(config) if is_dataclass(config) else dict(config)


def _coerce(value: Any, annotation: Any) -> Any:
    """Coerce INI/env strings into the annotated field type"""
    type_name = annotation.__name__ if isinstance(annotation, type) else str(annotation)
    optional = 'Optional' in str(annotation)
    if value is None:
        return None
    if isinstance(value, str) and optional and value.strip().lower() in ('', 'none', 'null'):
        return None
    if 'bool' in type_name:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ('1', 'true', 'yes', 'on'):
            return True
        if text in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError(f"expected a boolean, got {value!r}")
    if 'int' in type_name:
        if isinstance(value, bool):
            raise ValueError(f"expected an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"expected an integer, got {value!r}")
        return int(str(value).replace('_', '')) if isinstance(value, str) else int(value)
    if 'float' in type_name:
        return float(value)
    return str(value)
