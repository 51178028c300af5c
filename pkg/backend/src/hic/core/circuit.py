"""
Circuit intermediate representation

Gates, circuits and Pauli observables over logical qubits, plus the derived
two-qubit interaction graph and an OpenQASM 2 emitter for the supported subset.
All types are immutable after construction.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ..utils.exceptions import ValidationError


class GateKind(str, Enum):
    """Supported gate kinds (values are the OpenQASM names)"""
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RZ = "rz"
    RX = "rx"
    CX = "cx"
    CZ = "cz"
    RZZ = "rzz"
    SWAP = "swap"
    MEASURE = "measure"
    BARRIER = "barrier"


SINGLE_QUBIT_KINDS = frozenset({
    GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.RZ, GateKind.RX,
})
TWO_QUBIT_KINDS = frozenset({GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP})
PARAMETRIC_KINDS = frozenset({GateKind.RZ, GateKind.RX, GateKind.RZZ})

# kinds a gate cut can replace
CUTTABLE_KINDS = frozenset({GateKind.CX, GateKind.CZ, GateKind.RZZ})

_INVERSE_KIND = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


@dataclass(frozen=True)
class Gate:
    """A single operation on logical qubits

    ``tag`` marks placeholder operations introduced by cutting; it is not part
    of the QASM surface.
    """
    kind: GateKind
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()
    tag: Optional[str] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'qubits', tuple(int(q) for q in self.qubits))
        object.__setattr__(self, 'params', tuple(float(p) for p in self.params))

        if kind in TWO_QUBIT_KINDS:
            expected_arity: Optional[int] = 2
        elif kind == GateKind.BARRIER:
            expected_arity = None
        else:
            expected_arity = 1

        if expected_arity is not None and len(self.qubits) != expected_arity:
            raise ValidationError(
                f"Gate '{kind.value}' expects {expected_arity} qubit(s), got {len(self.qubits)}",
                field='qubits'
            )
        if kind == GateKind.BARRIER and not self.qubits:
            raise ValidationError("Barrier needs at least one qubit", field='qubits')
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(
                f"Gate '{kind.value}' repeats a qubit: {list(self.qubits)}", field='qubits'
            )
        if any(q < 0 for q in self.qubits):
            raise ValidationError("Qubit indices must be non-negative", field='qubits')

        expected_params = 1 if kind in PARAMETRIC_KINDS else 0
        if len(self.params) != expected_params:
            raise ValidationError(
                f"Gate '{kind.value}' expects {expected_params} parameter(s), got {len(self.params)}",
                field='params'
            )

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    @property
    def is_single_qubit(self) -> bool:
        return self.kind in SINGLE_QUBIT_KINDS

    @property
    def is_directive(self) -> bool:
        """Measure and barrier do not count as unitary operations"""
        return self.kind in (GateKind.MEASURE, GateKind.BARRIER)

    def inverse(self) -> 'Gate':
        """Adjoint of a unitary gate

        Returns:
            Gate: Inverse gate (barriers are returned unchanged)
        """
        if self.kind == GateKind.MEASURE:
            raise ValidationError("Measurement has no inverse", field='kind')
        if self.kind in _INVERSE_KIND:
            return Gate(_INVERSE_KIND[self.kind], self.qubits, tag=self.tag)
        if self.kind in PARAMETRIC_KINDS:
            return Gate(self.kind, self.qubits, (-self.params[0],), tag=self.tag)
        return self

    def remap(self, mapping: Dict[int, int]) -> 'Gate':
        """Same gate on relabelled qubits"""
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.params, self.tag)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``num_qubits`` logical qubits"""
    num_qubits: int
    gates: Tuple[Gate, ...] = ()
    name: str = "circuit"

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        if self.num_qubits < 1:
            raise ValidationError("Circuit needs at least one qubit", field='num_qubits')
        for index, gate in enumerate(self.gates):
            if any(q >= self.num_qubits for q in gate.qubits):
                raise ValidationError(
                    f"Gate {index} ({gate.kind.value}) touches qubit {max(gate.qubits)} "
                    f"but the circuit has {self.num_qubits} qubits",
                    field='gates',
                    details={'gate_index': index}
                )

    def __len__(self) -> int:
        return len(self.gates)

    def two_qubit_gates(self) -> List[Tuple[int, Gate]]:
        """(index, gate) for every two-qubit gate in program order"""
        return [(i, g) for i, g in enumerate(self.gates) if g.is_two_qubit]

    def count_ops(self) -> Dict[str, int]:
        """Number of gates per kind name"""
        return dict(Counter(g.kind.value for g in self.gates))

    def inverse(self) -> 'Circuit':
        """Adjoint circuit; final measurements are not allowed"""
        return Circuit(
            self.num_qubits,
            tuple(g.inverse() for g in reversed(self.gates)),
            name=f"{self.name}_dg",
        )

    def compose(self, other: 'Circuit', name: Optional[str] = None) -> 'Circuit':
        """Append ``other`` (same width) after this circuit"""
        if other.num_qubits != self.num_qubits:
            raise ValidationError(
                f"Cannot compose a {other.num_qubits}-qubit circuit onto {self.num_qubits} qubits",
                field='num_qubits'
            )
        return Circuit(self.num_qubits, self.gates + other.gates, name=name or self.name)

    def without_final_measurements(self) -> 'Circuit':
        """Drop untagged measurements (and barriers) with no later gate on their qubit"""
        kept: List[Gate] = []
        busy = set()
        for gate in reversed(self.gates):
            if gate.kind == GateKind.MEASURE and gate.tag is None and gate.qubits[0] not in busy:
                continue
            if gate.kind == GateKind.BARRIER and gate.tag is None and not (set(gate.qubits) & busy):
                continue
            if not gate.is_directive or gate.tag is not None:
                busy.update(gate.qubits)
            kept.append(gate)
        return Circuit(self.num_qubits, tuple(reversed(kept)), name=self.name)

    def with_gates(self, gates: Iterable[Gate]) -> 'Circuit':
        return Circuit(self.num_qubits, tuple(gates), name=self.name)


@dataclass(frozen=True)
class PauliTerm:
    """coefficient * (tensor product of single-qubit Paulis)"""
    coefficient: float
    paulis: Tuple[Tuple[int, str], ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted((int(q), str(p).upper()) for q, p in self.paulis))
        qubits = [q for q, _ in ordered]
        if len(set(qubits)) != len(qubits):
            raise ValidationError("Pauli term repeats a qubit", field='paulis')
        for _, pauli in ordered:
            if pauli not in ('X', 'Y', 'Z'):
                raise ValidationError(f"Unknown Pauli '{pauli}'", field='paulis')
        object.__setattr__(self, 'paulis', ordered)
        object.__setattr__(self, 'coefficient', float(self.coefficient))

    @property
    def qubits(self) -> Tuple[int, ...]:
        return tuple(q for q, _ in self.paulis)

    @property
    def is_diagonal(self) -> bool:
        return all(p == 'Z' for _, p in self.paulis)


@dataclass(frozen=True)
class Observable:
    """Real linear combination of Pauli strings"""
    terms: Tuple[PauliTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))

    @classmethod
    def mean_z(cls, num_qubits: int) -> 'Observable':
        """(1/n) * sum_i Z_i"""
        weight = 1.0 / num_qubits
        return cls(tuple(PauliTerm(weight, ((q, 'Z'),)) for q in range(num_qubits)))

    @classmethod
    def from_label(cls, label: str, coefficient: float = 1.0) -> 'Observable':
        """Single Pauli string; character i acts on qubit i (``I`` is identity)"""
        paulis = tuple((q, p) for q, p in enumerate(label.upper()) if p != 'I')
        return cls((PauliTerm(coefficient, paulis),))

    @property
    def is_diagonal(self) -> bool:
        return all(term.is_diagonal for term in self.terms)

    def max_qubit(self) -> int:
        return max((q for term in self.terms for q in term.qubits), default=-1)

    def __add__(self, other: 'Observable') -> 'Observable':
        return Observable(self.terms + other.terms)


def interaction_graph(circuit: Circuit) -> nx.Graph:
    """Weighted two-qubit interaction graph

    Every logical qubit is a node; an edge's ``weight`` counts the two-qubit
    gates acting on that pair.

    Args:
        circuit: Circuit to analyse

    Returns:
        nx.Graph: Interaction graph
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(circuit.num_qubits))
    for _, gate in circuit.two_qubit_gates():
        a, b = gate.qubits
        if graph.has_edge(a, b):
            graph[a][b]['weight'] += 1
        else:
            graph.add_edge(a, b, weight=1)
    return graph


def _format_param(value: float) -> str:
    return repr(float(value))


def emit_qasm(circuit: Circuit) -> str:
    """Render a circuit in the supported OpenQASM 2 subset

    Placeholder tags are dropped. Angles are written with ``repr`` so that
    parsing the output reproduces them exactly.

    Args:
        circuit: Circuit to render

    Returns:
        str: QASM program text
    """
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f'qreg q[{circuit.num_qubits}];']
    if any(g.kind == GateKind.MEASURE for g in circuit.gates):
        lines.append(f'creg c[{circuit.num_qubits}];')

    for gate in circuit.gates:
        qargs = ','.join(f'q[{q}]' for q in gate.qubits)
        if gate.kind == GateKind.MEASURE:
            lines.append(f'measure q[{gate.qubits[0]}] -> c[{gate.qubits[0]}];')
        elif gate.params:
            params = ','.join(_format_param(p) for p in gate.params)
            lines.append(f'{gate.kind.value}({params}) {qargs};')
        else:
            lines.append(f'{gate.kind.value} {qargs};')

    return '\n'.join(lines) + '\n'


def gate_signature(gates: Sequence[Gate]) -> Tuple:
    """Hashable content key for a gate sequence"""
    return tuple((g.kind.value, g.qubits, g.params, g.tag) for g in gates)
