"""Utility modules for the cutting pipeline"""

from .config_utils import ConfigUtils, HICConfig
from .logging_utils import LoggingUtils, LogConfig, LogFormat

__all__ = [
    'ConfigUtils',
    'HICConfig',
    'LoggingUtils',
    'LogConfig',
    'LogFormat'
]
