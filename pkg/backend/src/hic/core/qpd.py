"""
Quasi-probability decomposition (QPD) engine

Local-operation decompositions for cut two-qubit gates (CX, CZ, RZZ) and for
cut wires, expansion of a cut strategy into deduplicated subexperiment
circuits, and classical recombination of their results.

A decomposition term lists the local operations applied on each side of a
cut as tokens: single-qubit gate names (``h``, ``s``, ``sdg``, ``z``, ``x``),
``m`` for a Z measurement whose +/-1 outcome multiplies the estimate, and
``mu`` for a measurement whose outcome is discarded. For wire cuts the left
side is the measurement on the upstream wire and the right side the state
prepared on the downstream wire (applied to |0>).
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .circuit import Circuit, Gate, GateKind, Observable, gate_signature
from .cut_finder import CutStrategy, GateCut, IncidentCut, Subcircuit
from .simulator import PauliString, gate_matrix
from ..utils.exceptions import (
    InvalidParameterError, MissingResultError, ObservableCrossingError, UnsupportedCutError
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)

Mask = FrozenSet[str]

SIGNED_MEASURE = 'm'
UNSIGNED_MEASURE = 'mu'
MEASURE_TOKENS = (SIGNED_MEASURE, UNSIGNED_MEASURE)

DEFAULT_MAX_COMBINATIONS = 1_000_000

_TOKEN_KIND = {
    'h': GateKind.H,
    's': GateKind.S,
    'sdg': GateKind.SDG,
    'z': GateKind.Z,
    'x': GateKind.X,
}

_SIDE_TAG = {'left': 'L', 'right': 'R', 'upstream': 'M', 'downstream': 'P'}


@dataclass(frozen=True)
class QPDTerm:
    """coefficient * (left local map) (x) (right local map)"""
    coefficient: float
    left_ops: Tuple[str, ...]
    right_ops: Tuple[str, ...]
    kind: str = 'gate'

    def ops_for(self, side: str) -> Tuple[str, ...]:
        return self.left_ops if side in ('left', 'upstream') else self.right_ops


def _cz_terms() -> List[QPDTerm]:
    half = 0.5
    return [
        QPDTerm(half, ('s',), ('s',)),
        QPDTerm(half, ('sdg',), ('sdg',)),
        QPDTerm(half, ('m',), ()),
        QPDTerm(-half, ('m',), ('z',)),
        QPDTerm(half, (), ('m',)),
        QPDTerm(-half, ('z',), ('m',)),
    ]


def decompose_gate_cut(gate: Gate) -> List[QPDTerm]:
    """Decompose a two-qubit gate into products of local operations

    CX uses the CZ decomposition conjugated by H on the target. RZZ(theta)
    terms with a zero coefficient are omitted. CX and CZ have a sampling
    overhead of 3; RZZ(theta) has 1 + 2|sin theta|, which is bounded by 3
    and reaches it at theta = pi/2. Execution counts use 9 per gate cut
    regardless of the angle.

    Args:
        gate: CX, CZ or RZZ gate

    Returns:
        list: Terms whose sum reproduces the gate's channel
    """
    if gate.kind == GateKind.CZ:
        return _cz_terms()
    if gate.kind == GateKind.CX:
        return [
            QPDTerm(t.coefficient, t.left_ops, ('h',) + t.right_ops + ('h',) if t.right_ops else ())
            for t in _cz_terms()
        ]
    if gate.kind == GateKind.RZZ:
        theta = gate.params[0]
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        terms = [
            QPDTerm(c * c, (), ()),
            QPDTerm(s * s, ('z',), ('z',)),
            QPDTerm(c * s, ('m',), ('s',)),
            QPDTerm(-c * s, ('m',), ('sdg',)),
            QPDTerm(c * s, ('s',), ('m',)),
            QPDTerm(-c * s, ('sdg',), ('m',)),
        ]
        return [t for t in terms if t.coefficient != 0.0]
    raise UnsupportedCutError(gate.kind.value)


def decompose_wire_cut() -> List[QPDTerm]:
    """Identity channel as Pauli-basis measure-and-prepare terms"""
    half = 0.5
    return [
        QPDTerm(half, ('mu',), (), 'wire'),
        QPDTerm(half, ('mu',), ('x',), 'wire'),
        QPDTerm(half, ('h', 'm'), ('h',), 'wire'),
        QPDTerm(-half, ('h', 'm'), ('x', 'h'), 'wire'),
        QPDTerm(half, ('sdg', 'h', 'm'), ('h', 's'), 'wire'),
        QPDTerm(-half, ('sdg', 'h', 'm'), ('x', 'h', 's'), 'wire'),
        QPDTerm(half, ('m',), (), 'wire'),
        QPDTerm(-half, ('m',), ('x',), 'wire'),
    ]


def sampling_overhead(terms: Sequence[QPDTerm]) -> float:
    """Sum of absolute coefficients"""
    return float(sum(abs(t.coefficient) for t in terms))


_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


def local_superoperator(ops: Sequence[str]) -> np.ndarray:
    """4x4 row-major superoperator of a token sequence (applied left to right)"""
    total = np.eye(4, dtype=complex)
    for token in ops:
        if token == SIGNED_MEASURE:
            step = np.kron(_P0, _P0) - np.kron(_P1, _P1)
        elif token == UNSIGNED_MEASURE:
            step = np.kron(_P0, _P0) + np.kron(_P1, _P1)
        else:
            k = gate_matrix(Gate(_TOKEN_KIND[token], (0,)))
            step = np.kron(k, k.conj())
        total = step @ total
    return total


def term_superoperator(term: QPDTerm) -> np.ndarray:
    """Superoperator of one weighted term

    Gate terms act on two qubits (16x16, qubit 0 is the left side); wire
    terms map one qubit to one qubit (4x4).
    """
    left = local_superoperator(term.left_ops)
    right = local_superoperator(term.right_ops)
    if term.kind == 'wire':
        trace_row = np.eye(2, dtype=complex).reshape(-1) @ left
        prepared = right @ np.array([1, 0, 0, 0], dtype=complex)
        return term.coefficient * np.outer(prepared, trace_row)
    combined = np.einsum('ikjl,pqrs->ipkqjrls', left.reshape(2, 2, 2, 2), right.reshape(2, 2, 2, 2))
    return term.coefficient * combined.reshape(16, 16)


def target_superoperator(gate: Optional[Gate] = None) -> np.ndarray:
    """Channel a decomposition must reproduce (identity wire when ``gate`` is None)"""
    if gate is None:
        return np.eye(4, dtype=complex)
    unitary = gate_matrix(Gate(gate.kind, (0, 1), gate.params))
    return np.kron(unitary, unitary.conj())


def decomposition_superoperator(terms: Sequence[QPDTerm]) -> np.ndarray:
    return sum(term_superoperator(t) for t in terms)


def _normalize(ops: Sequence[str]) -> Tuple[str, ...]:
    return tuple(SIGNED_MEASURE if t == UNSIGNED_MEASURE else t for t in ops)


def cut_terms(strategy: CutStrategy) -> Dict[int, List[QPDTerm]]:
    """Decomposition used for every cut id of a strategy"""
    terms = {}
    for k, action in enumerate(strategy.actions):
        if isinstance(action, GateCut):
            terms[k] = decompose_gate_cut(strategy.circuit.gates[action.gate_index])
        else:
            terms[k] = decompose_wire_cut()
    return terms


def _sides_by_cut(sub: Subcircuit) -> Dict[int, List[IncidentCut]]:
    grouped: Dict[int, List[IncidentCut]] = {}
    for incident in sub.incident_cuts:
        grouped.setdefault(incident.cut_id, []).append(incident)
    return dict(sorted(grouped.items()))


def _side_choices(sides: Sequence[IncidentCut], terms: Sequence[QPDTerm]) -> List[Tuple[Tuple[str, ...], ...]]:
    """Distinct (normalized) side-operation tuples one cut contributes to a fragment"""
    seen = []
    for term in terms:
        key = tuple(_normalize(term.ops_for(side.side)) for side in sides)
        if key not in seen:
            seen.append(key)
    return seen


def count_subexperiments(strategy: CutStrategy) -> int:
    """Number of distinct subexperiment circuits a strategy expands to"""
    terms = cut_terms(strategy)
    total = 0
    for sub in strategy.subcircuits:
        per_fragment = 1
        for cut_id, sides in _sides_by_cut(sub).items():
            per_fragment *= len(_side_choices(sides, terms[cut_id]))
        total += per_fragment
    return total


def _placeholder_tag(incident: IncidentCut) -> str:
    return f"c{incident.cut_id}.{_SIDE_TAG[incident.side]}"


def build_variant(sub: Subcircuit, choice: Mapping[str, Sequence[str]]) -> Circuit:
    """Concrete circuit for one assignment of local operations to placeholders

    Final (untagged) measurements and barriers are dropped; measurements
    introduced by the decomposition keep their placeholder tag.
    """
    gates: List[Gate] = []
    for gate in sub.circuit.gates:
        if gate.tag is None:
            if not gate.is_directive:
                gates.append(gate)
            continue
        qubit = gate.qubits[0]
        for token in choice[gate.tag]:
            if token in MEASURE_TOKENS:
                gates.append(Gate(GateKind.MEASURE, (qubit,), tag=gate.tag))
            else:
                gates.append(Gate(_TOKEN_KIND[token], (qubit,)))
    return sub.circuit.with_gates(gates)


@dataclass(frozen=True)
class Combination:
    """One product term of the full expansion"""
    coefficient: float
    picks: Tuple[Tuple[int, Mask], ...]


@dataclass(frozen=True)
class SubexperimentSet:
    """Deduplicated subexperiments plus the recipe to recombine them"""
    strategy: CutStrategy
    observable: Observable
    variants: Tuple[Tuple[Circuit, ...], ...]
    pauli_strings: Tuple[Tuple[PauliString, ...], ...]
    combinations: Tuple[Combination, ...]
    required_masks: Tuple[Dict[int, Tuple[Mask, ...]], ...] = field(default_factory=tuple)

    @property
    def num_subexperiments(self) -> int:
        return sum(len(v) for v in self.variants)

    def iter_experiments(self):
        """Yield (subcircuit index, variant index, circuit, masks)"""
        for s, variants in enumerate(self.variants):
            for v, circuit in enumerate(variants):
                yield s, v, circuit, self.required_masks[s].get(v, ())


def _fragment_pauli_strings(strategy: CutStrategy, observable: Observable) -> Tuple[Tuple[PauliString, ...], ...]:
    n = strategy.circuit.num_qubits
    if observable.max_qubit() >= n:
        raise ObservableCrossingError(
            f"observable references qubit {observable.max_qubit()} of a {n}-qubit circuit"
        )
    location: Dict[int, Tuple[int, int]] = {}
    for sub in strategy.subcircuits:
        for qubit, fq in sub.terminal_qubits.items():
            location[qubit] = (sub.index, fq)
    if set(location) != set(range(n)):
        raise ObservableCrossingError("some qubits end in no subcircuit")

    strings: List[List[PauliString]] = [[] for _ in strategy.subcircuits]
    for term in observable.terms:
        per_fragment: List[List[Tuple[int, str]]] = [[] for _ in strategy.subcircuits]
        for qubit, label in term.paulis:
            s, fq = location[qubit]
            per_fragment[s].append((fq, label))
        for s, paulis in enumerate(per_fragment):
            strings[s].append(tuple(sorted(paulis)))
    return tuple(tuple(s) for s in strings)


def generate_subexperiments(strategy: CutStrategy, observable: Optional[Observable] = None,
                            max_combinations: int = DEFAULT_MAX_COMBINATIONS) -> SubexperimentSet:
    """Expand a strategy into the circuits to execute

    Args:
        strategy: Cut strategy
        observable: Observable on the uncut circuit (default (1/n) sum Z_i)
        max_combinations: Largest product expansion accepted

    Returns:
        SubexperimentSet: Variants per subcircuit and recombination recipe
    """
    observable = observable or Observable.mean_z(strategy.circuit.num_qubits)
    pauli_strings = _fragment_pauli_strings(strategy, observable)
    terms = cut_terms(strategy)
    cut_ids = sorted(terms)
    expansion = math.prod(len(terms[k]) for k in cut_ids)
    if expansion > max_combinations:
        raise InvalidParameterError(
            'max_combinations',
            f"strategy expands to {expansion} terms, above the limit of {max_combinations}",
            value=max_combinations
        )

    variants: List[List[Circuit]] = []
    variant_lookup: List[Dict[Tuple, int]] = []
    fragment_sides = [_sides_by_cut(sub) for sub in strategy.subcircuits]
    for sub, sides_by_cut in zip(strategy.subcircuits, fragment_sides):
        circuits: List[Circuit] = []
        by_signature: Dict[Tuple, int] = {}
        lookup: Dict[Tuple, int] = {}
        cut_order = list(sides_by_cut)
        options = [_side_choices(sides_by_cut[k], terms[k]) for k in cut_order]
        for picked in itertools.product(*options):
            choice = {}
            for k, side_ops in zip(cut_order, picked):
                for incident, ops in zip(sides_by_cut[k], side_ops):
                    choice[_placeholder_tag(incident)] = ops
            circuit = build_variant(sub, choice)
            signature = gate_signature(circuit.gates)
            if signature not in by_signature:
                by_signature[signature] = len(circuits)
                circuits.append(circuit)
            lookup[picked] = by_signature[signature]
        variants.append(circuits)
        variant_lookup.append(lookup)

    combinations: List[Combination] = []
    required: List[Dict[int, set]] = [{} for _ in strategy.subcircuits]
    for indices in itertools.product(*(range(len(terms[k])) for k in cut_ids)):
        chosen = {k: terms[k][i] for k, i in zip(cut_ids, indices)}
        coefficient = math.prod(t.coefficient for t in chosen.values())
        picks = []
        for s, sides_by_cut in enumerate(fragment_sides):
            key = []
            mask = set()
            for k, sides in sides_by_cut.items():
                term = chosen[k]
                key.append(tuple(_normalize(term.ops_for(side.side)) for side in sides))
                for side in sides:
                    if SIGNED_MEASURE in term.ops_for(side.side):
                        mask.add(_placeholder_tag(side))
            variant = variant_lookup[s][tuple(key)]
            frozen = frozenset(mask)
            required[s].setdefault(variant, set()).add(frozen)
            picks.append((variant, frozen))
        combinations.append(Combination(coefficient, tuple(picks)))

    subexperiments = SubexperimentSet(
        strategy=strategy,
        observable=observable,
        variants=tuple(tuple(v) for v in variants),
        pauli_strings=pauli_strings,
        combinations=tuple(combinations),
        required_masks=tuple(
            {v: tuple(sorted(masks, key=sorted)) for v, masks in sorted(r.items())} for r in required
        ),
    )
    logger.info(
        "Generated subexperiments",
        extra={'cuts': len(cut_ids), 'combinations': len(combinations),
               'subexperiments': subexperiments.num_subexperiments}
    )
    return subexperiments


@dataclass(frozen=True)
class VariantResult:
    """Estimates for one executed variant

    ``values[mask][t]`` is the sign-weighted expectation of the fragment's
    Pauli string for observable term ``t``.
    """
    values: Dict[Mask, np.ndarray]
    std_errors: Dict[Mask, np.ndarray] = field(default_factory=dict)
    shots: int = 0


@dataclass(frozen=True)
class ReconstructionResult:
    expectation: float
    std_error: float
    shots_used: int


def reconstruct(subexperiments: SubexperimentSet,
                results: Mapping[Tuple[int, int], VariantResult]) -> ReconstructionResult:
    """Recombine subexperiment estimates into the uncut expectation value

    The standard error propagates each estimate's error to first order,
    treating estimates as independent.

    Args:
        subexperiments: Output of ``generate_subexperiments``
        results: Result per (subcircuit index, variant index)

    Returns:
        ReconstructionResult: Expectation, standard error and total shots
    """
    for s, v, _, masks in subexperiments.iter_experiments():
        result = results.get((s, v))
        if result is None:
            raise MissingResultError(s, v)
        for mask in masks:
            if mask not in result.values:
                raise MissingResultError(s, v)

    coefficients = np.array([t.coefficient for t in subexperiments.observable.terms])
    num_terms = coefficients.size
    per_term = np.zeros(num_terms)
    gradients: Dict[Tuple[int, int, Mask], np.ndarray] = {}

    for combination in subexperiments.combinations:
        factors = [results[(s, variant)].values[mask] for s, (variant, mask) in enumerate(combination.picks)]
        product = np.ones(num_terms)
        for f in factors:
            product = product * f
        per_term += combination.coefficient * product
        for s, (variant, mask) in enumerate(combination.picks):
            others = np.ones(num_terms)
            for j, f in enumerate(factors):
                if j != s:
                    others = others * f
            key = (s, variant, mask)
            gradients[key] = gradients.get(key, np.zeros(num_terms)) + combination.coefficient * others

    expectation = float(per_term @ coefficients)
    variance = 0.0
    for (s, variant, mask), gradient in gradients.items():
        errors = results[(s, variant)].std_errors.get(mask)
        if errors is not None:
            variance += float(np.sum((gradient * coefficients * errors) ** 2))

    shots_used = sum(
        results[(s, v)].shots for s, variants in enumerate(subexperiments.variants) for v in range(len(variants))
    )
    return ReconstructionResult(expectation=expectation, std_error=math.sqrt(variance), shots_used=shots_used)
