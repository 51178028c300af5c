"""
Hardware-informed circuit cutting

Punctures a device calibration into low-noise islands, searches gate and
wire cut strategies for every island size, scores their layouts and runs the
winning strategy through quasi-probability reconstruction.
"""

__version__ = '0.1.0'

from .core import (
    Circuit, Gate, GateKind, Observable, find_cuts, gen_topology, load_calibration, parse_qasm, puncture
)
from .services import ExperimentService, SelectorService, compare_with_baseline, select

__all__ = [
    '__version__',
    'Circuit', 'Gate', 'GateKind', 'Observable', 'find_cuts', 'gen_topology', 'load_calibration',
    'parse_qasm', 'puncture',
    'ExperimentService', 'SelectorService', 'compare_with_baseline', 'select',
]
