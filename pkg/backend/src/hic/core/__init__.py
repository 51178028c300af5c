"""Core algorithms: circuits, hardware, puncturing, cutting, layout, QPD and simulation"""

from .circuit import Circuit, Gate, GateKind, Observable, PauliTerm, interaction_graph, emit_qasm
from .qasm import parse_qasm
from .generators import gen_ising_1d, gen_random_clifford, gen_qaoa_mirrored
from .hardware import CalibrationSnapshot, NoiseProfile, load_calibration, gen_topology
from .puncture import puncture, zscore_outliers, candidate_constraints
from .cut_finder import CutStrategy, find_cuts, oracle_min_cuts, overhead, equal_partition_constraint
from .layout import layout_score, place_and_route, weighted_score, full_objective, norm_correlation
from .qpd import decompose_gate_cut, decompose_wire_cut, generate_subexperiments, reconstruct
from .simulator import exact_expectation, noisy_expectation, NoisyExecConfig

__all__ = [
    'Circuit',
    'Gate',
    'GateKind',
    'Observable',
    'PauliTerm',
    'interaction_graph',
    'emit_qasm',
    'parse_qasm',
    'gen_ising_1d',
    'gen_random_clifford',
    'gen_qaoa_mirrored',
    'CalibrationSnapshot',
    'NoiseProfile',
    'load_calibration',
    'gen_topology',
    'puncture',
    'zscore_outliers',
    'candidate_constraints',
    'CutStrategy',
    'find_cuts',
    'oracle_min_cuts',
    'overhead',
    'equal_partition_constraint',
    'layout_score',
    'place_and_route',
    'weighted_score',
    'full_objective',
    'norm_correlation',
    'decompose_gate_cut',
    'decompose_wire_cut',
    'generate_subexperiments',
    'reconstruct',
    'exact_expectation',
    'noisy_expectation',
    'NoisyExecConfig'
]
