"""
Statevector simulator

Exact expectation values by statevector evolution (mid-circuit measurements
branch into unnormalized states), and noisy estimates from batched Pauli
trajectories driven by calibration data: depolarizing errors after every
operation at its calibrated rate plus classical readout flips.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from .circuit import Circuit, Gate, GateKind, Observable
from .hardware import NoiseProfile, edge_key
from ..utils.exceptions import (
    SimulationCapError, UnmappedOpError, ValidationError, InvalidParameterError
)
from ..utils.logging_utils import LoggingUtils

if TYPE_CHECKING:
    from .layout import Layout

logger = LoggingUtils.get_logger(__name__)

DEFAULT_MAX_QUBITS = 14
SHOTS_PER_CHUNK = 1024

PauliString = Tuple[Tuple[int, str], ...]
Mask = FrozenSet[str]

_SQRT_HALF = 1.0 / math.sqrt(2.0)

PAULI = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}

_FIXED_1Q = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.X: PAULI['X'],
    GateKind.Y: PAULI['Y'],
    GateKind.Z: PAULI['Z'],
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}

_PAULI_LABELS = ('I', 'X', 'Y', 'Z')


def gate_matrix(gate: Gate) -> np.ndarray:
    """Unitary of a gate; two-qubit matrices use qubits[0] as the high bit"""
    kind = gate.kind
    if kind in _FIXED_1Q:
        return _FIXED_1Q[kind]
    if kind == GateKind.RZ:
        theta = gate.params[0]
        return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    if kind == GateKind.RX:
        theta = gate.params[0]
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == GateKind.CX:
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if kind == GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind == GateKind.RZZ:
        theta = gate.params[0]
        a, b = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        return np.diag([a, b, b, a])
    if kind == GateKind.SWAP:
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    raise ValidationError(f"'{kind.value}' has no unitary", field='kind')


def _apply_1q(state: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(matrix, state, axes=([1], [axis])), 0, axis)


def _apply_2q(state: np.ndarray, matrix: np.ndarray, axis0: int, axis1: int) -> np.ndarray:
    tensor = matrix.reshape(2, 2, 2, 2)
    moved = np.tensordot(tensor, state, axes=([2, 3], [axis0, axis1]))
    return np.moveaxis(moved, [0, 1], [axis0, axis1])


def apply_gate(state: np.ndarray, gate: Gate, offset: int = 0) -> np.ndarray:
    """Apply a unitary gate; ``offset`` leading axes are batch axes"""
    matrix = gate_matrix(gate)
    if len(gate.qubits) == 1:
        return _apply_1q(state, matrix, gate.qubits[0] + offset)
    return _apply_2q(state, matrix, gate.qubits[0] + offset, gate.qubits[1] + offset)


def zero_state(num_qubits: int, batch: Optional[int] = None) -> np.ndarray:
    shape = (2,) * num_qubits if batch is None else (batch,) + (2,) * num_qubits
    state = np.zeros(shape, dtype=complex)
    state[(...,) + (0,) * num_qubits] = 1.0
    return state


def pauli_expectation(state: np.ndarray, paulis: PauliString) -> float:
    """<psi|P|psi> for an (unnormalized) statevector"""
    image = state
    for qubit, label in paulis:
        image = _apply_1q(image, PAULI[label], qubit)
    return float(np.vdot(state, image).real)


def _check_cap(circuit: Circuit, max_qubits: int) -> None:
    if circuit.num_qubits > max_qubits:
        raise SimulationCapError(circuit.num_qubits, max_qubits)


def _exact_branches(circuit: Circuit, max_qubits: int) -> List[Tuple[Dict[str, int], np.ndarray]]:
    """Evolve |0..0>, splitting on measurements

    Returns (signs by measurement tag, unnormalized state) per branch.
    """
    _check_cap(circuit, max_qubits)
    branches: List[Tuple[Dict[str, int], np.ndarray]] = [({}, zero_state(circuit.num_qubits))]
    for gate in circuit.gates:
        if gate.kind == GateKind.BARRIER:
            continue
        if gate.kind == GateKind.MEASURE:
            qubit = gate.qubits[0]
            split = []
            for signs, state in branches:
                for outcome in (0, 1):
                    projected = state.copy()
                    index = [slice(None)] * state.ndim
                    index[qubit] = 1 - outcome
                    projected[tuple(index)] = 0.0
                    if np.vdot(projected, projected).real < 1e-30:
                        continue
                    new_signs = dict(signs)
                    if gate.tag is not None:
                        new_signs[gate.tag] = 1 - 2 * outcome
                    split.append((new_signs, projected))
            branches = split
            continue
        branches = [(signs, apply_gate(state, gate)) for signs, state in branches]
    return branches


def statevector(circuit: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Final state of a measurement-free circuit as a flat vector"""
    if any(g.kind == GateKind.MEASURE for g in circuit.gates):
        raise ValidationError("statevector() needs a measurement-free circuit", field='gates')
    return _exact_branches(circuit, max_qubits)[0][1].reshape(-1)


def exact_expectation(circuit: Circuit, observable: Observable,
                      max_qubits: int = DEFAULT_MAX_QUBITS) -> float:
    """<psi|O|psi> by direct statevector evolution

    Args:
        circuit: Circuit (final measurements are ignored)
        observable: Pauli observable
        max_qubits: Width cap

    Returns:
        float: Expectation value
    """
    if observable.max_qubit() >= circuit.num_qubits:
        raise ValidationError("observable acts outside the circuit", field='observable')
    circuit = circuit.without_final_measurements()
    total = 0.0
    for _, state in _exact_branches(circuit, max_qubits):
        total += sum(t.coefficient * pauli_expectation(state, t.paulis) for t in observable.terms)
    return total


def exact_variant_values(circuit: Circuit, pauli_strings: Sequence[PauliString],
                         masks: Sequence[Mask],
                         max_qubits: int = DEFAULT_MAX_QUBITS) -> Dict[Mask, np.ndarray]:
    """Sign-weighted Pauli expectations of a subexperiment circuit

    For every mask, returns sum over measurement branches of (product of the
    +/-1 outcomes of the masked measurements) * <P_t> for each Pauli string.
    """
    branches = _exact_branches(circuit, max_qubits)
    per_branch = np.array([[pauli_expectation(state, p) for p in pauli_strings] for _, state in branches])
    results = {}
    for mask in masks:
        weights = np.array([math.prod(signs[tag] for tag in mask) for signs, _ in branches], dtype=float)
        results[mask] = weights @ per_branch if len(branches) else np.zeros(len(pauli_strings))
    return results


@dataclass(frozen=True)
class NoisyExecConfig:
    """Trajectory sampling settings"""
    shots: int = 4096
    seed: int = 1234
    readout_flips: bool = True
    jobs: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise InvalidParameterError('shots', "must be at least 1", value=self.shots)


@dataclass(frozen=True)
class _CompactProgram:
    circuit: Circuit
    op_errors: Tuple[float, ...]
    readout: Tuple[float, ...]


def _compact(routed: Circuit, extra_qubits: Sequence[int], noise: NoiseProfile,
             layout: Optional['Layout']) -> Tuple[_CompactProgram, Dict[int, int]]:
    """Restrict a routed circuit to the physical qubits it touches"""
    used = sorted({q for g in routed.gates for q in g.qubits} | set(extra_qubits))
    index = {q: i for i, q in enumerate(used)}
    allowed = layout.physical_qubits if layout is not None else None
    gates, errors = [], []
    for gate in routed.gates:
        if allowed is not None and any(q not in allowed for q in gate.qubits):
            raise UnmappedOpError(f"gate on qubits {list(gate.qubits)} leaves the layout", gate=gate.kind.value)
        if gate.kind == GateKind.BARRIER:
            continue
        if gate.is_two_qubit:
            key = edge_key(*gate.qubits)
            if key not in noise.cx_error:
                raise UnmappedOpError(f"no coupler between {key[0]} and {key[1]}", gate=gate.kind.value)
            errors.append(noise.cx_error[key])
        elif gate.kind == GateKind.MEASURE:
            errors.append(0.0)
        else:
            errors.append(noise.sx_error[gate.qubits[0]])
        gates.append(gate.remap(index))
    program = _CompactProgram(
        circuit=Circuit(max(1, len(used)), tuple(gates), name=routed.name),
        op_errors=tuple(errors),
        readout=tuple(noise.readout_error[q] for q in used),
    )
    return program, index


def _apply_pauli_subset(states: np.ndarray, rows: np.ndarray, label: str, qubit: int) -> None:
    if label == 'I' or rows.size == 0:
        return
    states[rows] = _apply_1q(states[rows], PAULI[label], qubit + 1)


def _trajectory_chunk(program: _CompactProgram, shots: int, seed: int, chunk: int,
                      z_strings: Sequence[Tuple[int, ...]], tags: Sequence[str],
                      readout_flips: bool) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    rng = np.random.default_rng([seed, chunk])
    n = program.circuit.num_qubits
    states = zero_state(n, batch=shots)
    signs = {tag: np.ones(shots) for tag in tags}
    reduce_axes = tuple(range(1, n))

    for gate, error in zip(program.circuit.gates, program.op_errors):
        if gate.kind == GateKind.MEASURE:
            q = gate.qubits[0]
            p1 = np.sum(np.abs(states.take(1, axis=q + 1)) ** 2, axis=reduce_axes)
            outcome = rng.random(shots) < p1
            keep = np.where(outcome, p1, 1.0 - p1)
            scale = np.where(keep > 0, 1.0 / np.sqrt(np.maximum(keep, 1e-300)), 0.0)
            shape = (shots,) + (1,) * (n - 1)
            zero_index = [slice(None)] * (n + 1)
            one_index = list(zero_index)
            zero_index[q + 1] = 0
            one_index[q + 1] = 1
            states[tuple(zero_index)] *= np.where(outcome, 0.0, scale).reshape(shape)
            states[tuple(one_index)] *= np.where(outcome, scale, 0.0).reshape(shape)
            bit = outcome
            if readout_flips:
                bit = bit ^ (rng.random(shots) < program.readout[q])
            if gate.tag is not None and gate.tag in signs:
                signs[gate.tag] = np.where(bit, -1.0, 1.0)
            continue

        states = apply_gate(states, gate, offset=1)
        if error <= 0.0:
            continue
        fired = np.flatnonzero(rng.random(shots) < error)
        if fired.size == 0:
            continue
        if len(gate.qubits) == 1:
            choice = rng.integers(1, 4, size=fired.size)
            for value in (1, 2, 3):
                _apply_pauli_subset(states, fired[choice == value], _PAULI_LABELS[value], gate.qubits[0])
        else:
            choice = rng.integers(1, 16, size=fired.size)
            for value in range(1, 16):
                rows = fired[choice == value]
                _apply_pauli_subset(states, rows, _PAULI_LABELS[value // 4], gate.qubits[0])
                _apply_pauli_subset(states, rows, _PAULI_LABELS[value % 4], gate.qubits[1])

    probabilities = np.abs(states.reshape(shots, -1)) ** 2
    probabilities /= probabilities.sum(axis=1, keepdims=True)
    cumulative = np.cumsum(probabilities, axis=1)
    draws = rng.random(shots)[:, None]
    basis = np.minimum((cumulative < draws).sum(axis=1), probabilities.shape[1] - 1)
    bits = np.stack([(basis >> (n - 1 - q)) & 1 for q in range(n)], axis=1).astype(bool)
    if readout_flips:
        flips = rng.random((shots, n)) < np.asarray(program.readout)[None, :]
        bits = bits ^ flips

    parity = np.where(bits, -1.0, 1.0)
    values = np.stack(
        [np.prod(parity[:, list(qubits)], axis=1) if qubits else np.ones(shots) for qubits in z_strings],
        axis=1,
    ) if z_strings else np.zeros((shots, 0))
    return signs, values


def _sample(program: _CompactProgram, cfg: NoisyExecConfig, z_strings: Sequence[Tuple[int, ...]],
            tags: Sequence[str]) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    chunks = []
    remaining = cfg.shots
    while remaining > 0:
        chunks.append(min(SHOTS_PER_CHUNK, remaining))
        remaining -= chunks[-1]
    results = Parallel(n_jobs=cfg.jobs, prefer='threads')(
        delayed(_trajectory_chunk)(program, size, cfg.seed, i, z_strings, tags, cfg.readout_flips)
        for i, size in enumerate(chunks)
    )
    signs = {tag: np.concatenate([r[0][tag] for r in results]) for tag in tags}
    values = np.concatenate([r[1] for r in results], axis=0)
    return signs, values


def _z_strings(paulis: Sequence[PauliString], to_compact) -> List[Tuple[int, ...]]:
    strings = []
    for string in paulis:
        if any(label != 'Z' for _, label in string):
            raise ValidationError("noisy execution supports diagonal (Z-string) observables only",
                                  field='observable')
        strings.append(tuple(to_compact(q) for q, _ in string))
    return strings


def _mean_and_error(samples: np.ndarray) -> Tuple[float, float]:
    mean = float(samples.mean())
    if samples.size < 2:
        return mean, 0.0
    return mean, float(samples.std(ddof=1) / math.sqrt(samples.size))


def noisy_variant_values(routed: Circuit, layout: 'Layout', noise: NoiseProfile, cfg: NoisyExecConfig,
                         pauli_strings: Sequence[PauliString], masks: Sequence[Mask],
                         max_qubits: int = DEFAULT_MAX_QUBITS
                         ) -> Tuple[Dict[Mask, np.ndarray], Dict[Mask, np.ndarray]]:
    """Sampled counterpart of ``exact_variant_values`` on a routed circuit

    Pauli strings refer to logical qubits and are read out through the
    layout's final mapping.

    Returns:
        (values, std_errors) keyed by mask
    """
    final_physical = [layout.final_mapping[q] for string in pauli_strings for q, _ in string]
    program, index = _compact(routed, final_physical, noise, layout)
    _check_cap(program.circuit, max_qubits)
    z_strings = _z_strings(pauli_strings, lambda q: index[layout.final_mapping[q]])
    tags = sorted({tag for mask in masks for tag in mask})
    signs, values = _sample(program, cfg, z_strings, tags)

    estimates, errors = {}, {}
    for mask in masks:
        weight = np.ones(cfg.shots)
        for tag in mask:
            weight = weight * signs[tag]
        weighted = values * weight[:, None]
        stats = [_mean_and_error(weighted[:, t]) for t in range(weighted.shape[1])]
        estimates[mask] = np.array([s[0] for s in stats])
        errors[mask] = np.array([s[1] for s in stats])
    return estimates, errors


def noisy_expectation(routed: Circuit, layout: 'Layout', noise: NoiseProfile, cfg: NoisyExecConfig,
                      observable: Optional[Observable] = None,
                      max_qubits: int = DEFAULT_MAX_QUBITS) -> Tuple[float, float]:
    """Trajectory estimate of a diagonal observable on a routed circuit

    Args:
        routed: Circuit on physical qubits (typically ``layout.routed``)
        layout: Placement giving the logical-to-physical readout mapping
        noise: Calibrated error rates
        cfg: Shots, seed and readout settings
        observable: Observable on logical qubits (default (1/n) sum Z_i)

    Returns:
        (estimate, std_error)
    """
    observable = observable or Observable.mean_z(len(layout.mapping))
    strings = [t.paulis for t in observable.terms]
    final_physical = [layout.final_mapping[q] for string in strings for q, _ in string]
    program, index = _compact(routed, final_physical, noise, layout)
    _check_cap(program.circuit, max_qubits)
    z_strings = _z_strings(strings, lambda q: index[layout.final_mapping[q]])
    _, values = _sample(program, cfg, z_strings, ())

    coefficients = np.array([t.coefficient for t in observable.terms])
    per_shot = values @ coefficients if coefficients.size else np.zeros(cfg.shots)
    estimate, std_error = _mean_and_error(per_shot)
    logger.debug(
        "Noisy estimate",
        extra={'shots': cfg.shots, 'seed': cfg.seed, 'estimate': estimate, 'std_error': std_error}
    )
    return estimate, std_error
