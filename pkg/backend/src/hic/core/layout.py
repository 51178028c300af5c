"""
Layout scorer

Places subcircuits onto connected components of the punctured coupling map,
routes them with greedy shortest-path SWAP insertion, and scores the result
with the calibrated error rates (lower is better). Also provides the
weighted layout score used for strategy selection, the two-term objective
and the Pearson correlation used to compare its terms.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .circuit import Circuit, Gate, GateKind, interaction_graph
from .cut_finder import Subcircuit
from .hardware import Edge, NoiseProfile, edge_key
from .puncture import Component
from ..utils.exceptions import (
    DegenerateVarianceError, EmptyInputError, InvalidParameterError, UnmappedOpError
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)


@dataclass(frozen=True)
class Layout:
    """Placement of a logical circuit on physical qubits

    ``mapping`` is the initial logical -> physical assignment and
    ``final_mapping`` the assignment after routing SWAPs.
    """
    mapping: Dict[int, int]
    component_id: int
    routed: Circuit
    physical_qubits: FrozenSet[int]
    allowed_edges: FrozenSet[Edge]
    final_mapping: Dict[int, int] = field(default_factory=dict)
    swaps: int = 0

    def __post_init__(self):
        if len(set(self.mapping.values())) != len(self.mapping):
            raise InvalidParameterError('mapping', "must be injective", value=self.mapping)
        if not self.final_mapping:
            object.__setattr__(self, 'final_mapping', dict(self.mapping))


@dataclass(frozen=True)
class ScoredPlacement:
    layout: Layout
    score: float
    width: int


@dataclass(frozen=True)
class ObjectiveInputs:
    """Inputs of the two-term objective"""
    placements: Sequence[ScoredPlacement]
    n: int
    alpha: float = 1.0


def decompose_native(circuit: Circuit) -> Circuit:
    """Lower RZZ, CZ and SWAP to CX plus single-qubit gates"""
    gates: List[Gate] = []
    for gate in circuit.gates:
        if gate.kind == GateKind.RZZ:
            a, b = gate.qubits
            gates += [Gate(GateKind.CX, (a, b)), Gate(GateKind.RZ, (b,), gate.params), Gate(GateKind.CX, (a, b))]
        elif gate.kind == GateKind.CZ:
            a, b = gate.qubits
            gates += [Gate(GateKind.H, (b,)), Gate(GateKind.CX, (a, b)), Gate(GateKind.H, (b,))]
        elif gate.kind == GateKind.SWAP:
            gates += _swap_as_cx(*gate.qubits)
        else:
            gates.append(gate)
    return circuit.with_gates(gates)


def _swap_as_cx(a: int, b: int) -> List[Gate]:
    return [Gate(GateKind.CX, (a, b)), Gate(GateKind.CX, (b, a)), Gate(GateKind.CX, (a, b))]


def _component_graph(component: Component, noise: NoiseProfile) -> nx.Graph:
    graph = component.graph()
    total = sum(noise.cx_error[e] for e in component.edges)
    for a, b in graph.edges:
        # hop count dominates, the error only breaks ties
        graph[a][b]['weight'] = 1.0 + noise.cx_error[edge_key(a, b)] / (1.0 + total)
    return graph


def route(circuit: Circuit, mapping: Dict[int, int], component: Component,
          noise: NoiseProfile) -> Layout:
    """Route a logical circuit under a fixed initial mapping

    Each two-qubit gate whose operands are not adjacent moves its first
    operand along the lowest-error shortest path towards the second; every
    SWAP is emitted as three CX gates. Placeholder tags are preserved.

    Args:
        circuit: Logical circuit
        mapping: Initial logical -> physical assignment inside the component
        component: Target component
        noise: Calibrated rates (tie-breaking between equal-length paths)

    Returns:
        Layout: Routed circuit on physical qubit indices
    """
    for logical, physical in mapping.items():
        if physical not in component.qubits:
            raise UnmappedOpError(f"logical qubit {logical} mapped outside component {component.id}")
    native = decompose_native(circuit)
    graph = _component_graph(component, noise)
    current = dict(mapping)
    occupant = {p: q for q, p in current.items()}
    gates: List[Gate] = []
    swaps = 0

    def move(src: int, dst: int) -> None:
        a, b = occupant.get(src), occupant.get(dst)
        if a is not None:
            current[a] = dst
        if b is not None:
            current[b] = src
        occupant.pop(src, None)
        occupant.pop(dst, None)
        if a is not None:
            occupant[dst] = a
        if b is not None:
            occupant[src] = b

    for gate in native.gates:
        if len(gate.qubits) == 2 and not gate.is_directive:
            pa, pb = current[gate.qubits[0]], current[gate.qubits[1]]
            if not graph.has_edge(pa, pb):
                try:
                    path = nx.dijkstra_path(graph, pa, pb, weight='weight')
                except nx.NetworkXNoPath as e:
                    raise UnmappedOpError(
                        f"qubits {pa} and {pb} are not connected in component {component.id}",
                        gate=gate.kind.value
                    ) from e
                for src, dst in zip(path[:-2], path[1:-1]):
                    gates += _swap_as_cx(src, dst)
                    move(src, dst)
                    swaps += 1
        gates.append(gate.remap(current))

    width = max(component.qubits) + 1
    routed = Circuit(width, tuple(gates), name=f"{circuit.name}_routed")
    return Layout(
        mapping=dict(mapping),
        component_id=component.id,
        routed=routed,
        physical_qubits=frozenset(component.qubits),
        allowed_edges=frozenset(component.edges),
        final_mapping=current,
        swaps=swaps,
    )


def layout_score(routed: Circuit, layout: Layout, noise: NoiseProfile) -> float:
    """1 - product of (1 - error) over every operation of a routed circuit

    CX gates use their edge error, other single-qubit gates the qubit's
    single-qubit error and measurements the readout error. Barriers are free.

    Args:
        routed: Circuit on physical qubits using native operations
        layout: Layout the circuit was routed on
        noise: Calibrated rates

    Returns:
        float: Score in [0, 1]
    """
    fidelity = 1.0
    for gate in routed.gates:
        if gate.kind == GateKind.BARRIER:
            continue
        outside = [q for q in gate.qubits if q not in layout.physical_qubits]
        if outside:
            raise UnmappedOpError(f"qubit {outside[0]} is not part of the layout", gate=gate.kind.value)
        if gate.is_two_qubit:
            key = edge_key(*gate.qubits)
            if key not in layout.allowed_edges:
                raise UnmappedOpError(f"edge {key} is not available on the layout", gate=gate.kind.value)
            fidelity *= 1.0 - noise.cx_error[key]
        elif gate.kind == GateKind.MEASURE:
            fidelity *= 1.0 - noise.readout_error[gate.qubits[0]]
        else:
            fidelity *= 1.0 - noise.sx_error[gate.qubits[0]]
    return 1.0 - fidelity


def _bfs_order(graph: nx.Graph, start: int) -> List[Tuple[int, Optional[int]]]:
    """(logical qubit, already placed neighbour) in BFS order covering every node"""
    order: List[Tuple[int, Optional[int]]] = []
    seen = set()
    roots = [start] + sorted(v for v in graph.nodes if v != start)
    for root in roots:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([(root, None)])
        while queue:
            node, parent = queue.popleft()
            order.append((node, parent))
            for neighbour in sorted(graph.neighbors(node)):
                if neighbour not in seen:
                    seen.add(neighbour)
                    queue.append((neighbour, node))
    return order


def _nearest_free(graph: nx.Graph, source: int, used: set) -> Optional[int]:
    distances = nx.single_source_shortest_path_length(graph, source)
    free = [(d, q) for q, d in distances.items() if q not in used]
    return min(free)[1] if free else None


def _anchor_placement(logical: nx.Graph, start: int, anchor: int,
                      physical: nx.Graph, noise: NoiseProfile) -> Optional[Dict[int, int]]:
    mapping: Dict[int, int] = {}
    used: set = set()
    for node, parent in _bfs_order(logical, start):
        if not mapping:
            target: Optional[int] = anchor
        else:
            origin = mapping[parent] if parent is not None else anchor
            options = sorted(
                (noise.cx_error[edge_key(origin, q)], q)
                for q in physical.neighbors(origin) if q not in used
            )
            target = options[0][1] if options else _nearest_free(physical, origin, used)
        if target is None:
            return None
        mapping[node] = target
        used.add(target)
    return mapping


def _start_vertices(logical: nx.Graph) -> List[int]:
    degrees = sorted((d, v) for v, d in logical.degree())
    low = degrees[0][1]
    high = min(v for d, v in degrees if d == degrees[-1][0])
    return [low] if low == high else [low, high]


def place_circuit(circuit: Circuit, component: Component, noise: NoiseProfile) -> Optional[ScoredPlacement]:
    """Best anchored-BFS placement of a circuit on a component, or None if it cannot fit"""
    width = circuit.num_qubits
    if width > component.size:
        return None
    logical = interaction_graph(circuit)
    physical = component.graph()

    best: Optional[ScoredPlacement] = None
    for anchor in sorted(component.qubits):
        for start in _start_vertices(logical):
            mapping = _anchor_placement(logical, start, anchor, physical, noise)
            if mapping is None:
                continue
            layout = route(circuit, mapping, component, noise)
            score = layout_score(layout.routed, layout, noise)
            if best is None or score < best.score:
                best = ScoredPlacement(layout=layout, score=score, width=width)
    return best


def place_and_route(sub: Subcircuit, component: Component, noise: NoiseProfile) -> Optional[ScoredPlacement]:
    """Place and route one subcircuit on a component

    Args:
        sub: Subcircuit
        component: Candidate island
        noise: Calibrated rates

    Returns:
        Optional[ScoredPlacement]: Lowest-score placement, None if the
        subcircuit is wider than the component
    """
    placement = place_circuit(sub.circuit, component, noise)
    if placement is not None:
        logger.debug(
            "Placed subcircuit",
            extra={'subcircuit': sub.index, 'component': component.id,
                   'score': placement.score, 'swaps': placement.layout.swaps}
        )
    return placement


def weighted_score(placements: Sequence[ScoredPlacement], n: int) -> float:
    """(1/n) * sum of width * score

    Args:
        placements: One placement per subcircuit
        n: Total number of qubits (wire segments)

    Returns:
        float: Weighted average layout score
    """
    if not placements:
        raise EmptyInputError('weighted_score')
    total_width = sum(p.width for p in placements)
    if total_width != n:
        logger.warning("Placement widths do not sum to n", extra={'widths': total_width, 'n': n})
    return sum(p.width * p.score for p in placements) / n


def objective_terms(inputs: ObjectiveInputs) -> Tuple[float, float]:
    """(norm-1, norm-2) terms of the objective"""
    if not inputs.placements:
        raise EmptyInputError('full_objective')
    norm1 = weighted_score(inputs.placements, inputs.n)
    norm2 = sum((norm1 - p.width * p.score) ** 2 for p in inputs.placements) / len(inputs.placements)
    return norm1, norm2


def full_objective(inputs: ObjectiveInputs) -> float:
    """alpha * norm-1 + (1 - alpha) * norm-2"""
    if not 0.0 <= inputs.alpha <= 1.0:
        raise InvalidParameterError('alpha', "must lie in [0, 1]", value=inputs.alpha)
    norm1, norm2 = objective_terms(inputs)
    return inputs.alpha * norm1 + (1.0 - inputs.alpha) * norm2


def norm_correlation(samples: Sequence[Tuple[float, float]]) -> float:
    """Pearson correlation between paired norm-1 and norm-2 values"""
    if len(samples) < 2:
        raise EmptyInputError('norm_correlation')
    data = np.asarray(samples, dtype=float)
    for column, name in ((0, 'norm1'), (1, 'norm2')):
        if np.ptp(data[:, column]) == 0.0:
            raise DegenerateVarianceError(name)
    r = float(np.corrcoef(data[:, 0], data[:, 1])[0, 1])
    return max(-1.0, min(1.0, r))

