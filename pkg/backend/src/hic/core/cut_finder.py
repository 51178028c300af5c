"""
Cut finder

Gate and wire cut actions, replay of an action set into subcircuits, a
best-first (A*) search for the cheapest action set meeting a device
constraint, an exhaustive oracle for small instances, and overhead accounting.

The search walks the two-qubit gates in program order. A state records, for
every qubit, which block its live wire segment belongs to and the width of
every live block. At each gate crossing two blocks it may merge them (free,
if the merged width fits), cut the gate (x9), or cut one or both operand wires
so that the fresh segment joins the other block (x16 per wire).
"""

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from networkx.utils import UnionFind

from .circuit import Circuit, Gate, GateKind, CUTTABLE_KINDS, emit_qasm
from .qasm import parse_qasm
from ..utils.exceptions import (
    InvalidParameterError, InvalidStrategyError, UnsupportedCutError,
    OracleBudgetExceededError, ValidationError
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)

GATE_CUT_COST = 9
WIRE_CUT_COST = 16


@dataclass(frozen=True)
class GateCut:
    """Replace two-qubit gate ``gate_index`` by local operations"""
    gate_index: int

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.gate_index, 0, -1)

    def to_dict(self) -> Dict[str, Any]:
        return {'type': 'gate', 'gate_index': self.gate_index}


@dataclass(frozen=True)
class WireCut:
    """Sever ``qubit`` right after global gate ``position``"""
    qubit: int
    position: int

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.position, 1, self.qubit)

    def to_dict(self) -> Dict[str, Any]:
        return {'type': 'wire', 'qubit': self.qubit, 'position': self.position}


CutAction = Union[GateCut, WireCut]


def action_from_dict(data: Dict[str, Any]) -> CutAction:
    if data.get('type') == 'gate':
        return GateCut(int(data['gate_index']))
    if data.get('type') == 'wire':
        return WireCut(int(data['qubit']), int(data['position']))
    raise InvalidStrategyError(f"unknown cut action {data!r}")


@dataclass(frozen=True)
class Segment:
    """Piece of a qubit wire between two wire cuts

    Holds the gates with ``start_after < index <= end_at`` (``end_at`` None
    for the terminal segment).
    """
    qubit: int
    index: int
    start_after: int
    end_at: Optional[int]

    @property
    def key(self) -> Tuple[int, int]:
        return (self.qubit, self.index)

    @property
    def is_terminal(self) -> bool:
        return self.end_at is None


@dataclass(frozen=True)
class IncidentCut:
    """A cut touching a subcircuit: which side lands on which fragment qubit"""
    cut_id: int
    action: CutAction
    side: str
    fragment_qubit: int


@dataclass(frozen=True)
class Subcircuit:
    """Fragment of a cut circuit

    ``circuit`` carries placeholder operations tagged ``c{k}.L``/``c{k}.R``
    (gate-cut sides), ``c{k}.M`` (wire-cut measurement) and ``c{k}.P``
    (wire-cut preparation), and ends with a measurement on every terminal
    wire segment.
    """
    index: int
    circuit: Circuit
    segments: Tuple[Segment, ...]
    incident_cuts: Tuple[IncidentCut, ...]

    @property
    def width(self) -> int:
        return len(self.segments)

    @property
    def segment_map(self) -> Dict[Tuple[int, int], int]:
        return {seg.key: i for i, seg in enumerate(self.segments)}

    @property
    def terminal_qubits(self) -> Dict[int, int]:
        """Original qubit -> fragment qubit, for wires that end here"""
        return {seg.qubit: i for i, seg in enumerate(self.segments) if seg.is_terminal}


@dataclass(frozen=True)
class OverheadReport:
    """Sampling overhead of a cut strategy"""
    num_gate_cuts: int
    num_wire_cuts: int
    gamma: int
    canonical_executions: int
    actual_subexperiments: int


@dataclass(frozen=True)
class CutStrategy:
    """Cut actions plus the subcircuits they induce"""
    circuit: Circuit
    actions: Tuple[CutAction, ...]
    device_constraint: int
    subcircuits: Tuple[Subcircuit, ...]

    @property
    def num_gate_cuts(self) -> int:
        return sum(isinstance(a, GateCut) for a in self.actions)

    @property
    def num_wire_cuts(self) -> int:
        return sum(isinstance(a, WireCut) for a in self.actions)

    @property
    def num_cuts(self) -> int:
        return len(self.actions)

    @property
    def widths(self) -> List[int]:
        return [s.width for s in self.subcircuits]

    @property
    def canonical_executions(self) -> int:
        return GATE_CUT_COST ** self.num_gate_cuts * WIRE_CUT_COST ** self.num_wire_cuts


def canonical_executions(num_gate_cuts: int, num_wire_cuts: int) -> int:
    return GATE_CUT_COST ** num_gate_cuts * WIRE_CUT_COST ** num_wire_cuts


def overhead(strategy: CutStrategy) -> OverheadReport:
    """Sampling overhead and execution counts

    Args:
        strategy: Cut strategy

    Returns:
        OverheadReport: gamma = 3^g 4^w, canonical executions = gamma^2, and
        the deduplicated subexperiment count
    """
    from .qpd import count_subexperiments

    g, w = strategy.num_gate_cuts, strategy.num_wire_cuts
    gamma = 3 ** g * 4 ** w
    return OverheadReport(
        num_gate_cuts=g,
        num_wire_cuts=w,
        gamma=gamma,
        canonical_executions=gamma * gamma,
        actual_subexperiments=count_subexperiments(strategy),
    )


def equal_partition_constraint(circuit: Circuit) -> int:
    """Naive baseline device constraint: ceil(n / 2)"""
    return math.ceil(circuit.num_qubits / 2)


def _wire_ops(circuit: Circuit) -> Dict[int, List[int]]:
    """Global indices of the non-directive gates acting on each qubit"""
    ops: Dict[int, List[int]] = {q: [] for q in range(circuit.num_qubits)}
    for index, gate in enumerate(circuit.gates):
        if not gate.is_directive:
            for q in gate.qubits:
                ops[q].append(index)
    return ops


def _check_measurements(circuit: Circuit) -> None:
    last_op = {q: ops[-1] if ops else -1 for q, ops in _wire_ops(circuit).items()}
    for index, gate in enumerate(circuit.gates):
        if gate.kind == GateKind.MEASURE and index < last_op[gate.qubits[0]]:
            raise ValidationError(
                f"mid-circuit measurement on qubit {gate.qubits[0]} is not supported",
                field='gates', details={'gate_index': index}
            )


def _validate_actions(circuit: Circuit, actions: Sequence[CutAction]) -> None:
    if len(set(actions)) != len(actions):
        raise InvalidStrategyError("duplicate cut action")
    wire_ops = _wire_ops(circuit)
    for action in actions:
        if isinstance(action, GateCut):
            if not 0 <= action.gate_index < len(circuit.gates):
                raise InvalidStrategyError(f"gate index {action.gate_index} out of range")
            gate = circuit.gates[action.gate_index]
            if not gate.is_two_qubit:
                raise InvalidStrategyError(
                    f"gate cut target {action.gate_index} is not a two-qubit gate",
                    details={'gate_index': action.gate_index, 'kind': gate.kind.value}
                )
            if gate.kind not in CUTTABLE_KINDS:
                raise UnsupportedCutError(gate.kind.value)
        elif isinstance(action, WireCut):
            if not 0 <= action.qubit < circuit.num_qubits:
                raise InvalidStrategyError(f"wire cut qubit {action.qubit} out of range")
            ops = wire_ops[action.qubit]
            if action.position not in ops or action.position == ops[-1]:
                raise InvalidStrategyError(
                    f"wire cut on qubit {action.qubit} after gate {action.position} "
                    "must lie strictly between two gates on that wire",
                    details=action.to_dict()
                )
        else:
            raise InvalidStrategyError(f"unknown cut action {action!r}")


def _segments(circuit: Circuit, actions: Sequence[CutAction]) -> Dict[int, List[Segment]]:
    positions: Dict[int, List[int]] = {q: [] for q in range(circuit.num_qubits)}
    for action in actions:
        if isinstance(action, WireCut):
            positions[action.qubit].append(action.position)
    segments: Dict[int, List[Segment]] = {}
    for q, cuts in positions.items():
        bounds = [-1] + sorted(cuts)
        segments[q] = [
            Segment(q, i, bounds[i], bounds[i + 1] if i + 1 < len(bounds) else None)
            for i in range(len(bounds))
        ]
    return segments


def _segment_at(segments: List[Segment], gate_index: int) -> Segment:
    for seg in segments:
        if seg.start_after < gate_index and (seg.end_at is None or gate_index <= seg.end_at):
            return seg
    raise InvalidStrategyError(f"no wire segment covers gate {gate_index}")


def apply_cuts(circuit: Circuit, actions: Sequence[CutAction],
               device_constraint: Optional[int] = None) -> CutStrategy:
    """Replay cut actions into subcircuits

    Input barriers and final measurements are dropped; fragments are ordered
    by their smallest (qubit, segment) key.

    Args:
        circuit: Uncut circuit
        actions: Gate and wire cuts
        device_constraint: Optional width limit to enforce

    Returns:
        CutStrategy: Strategy with its subcircuits
    """
    _check_measurements(circuit)
    _validate_actions(circuit, actions)
    actions = tuple(sorted(actions, key=lambda a: a.sort_key))
    segments = _segments(circuit, actions)
    gate_cuts = {a.gate_index: k for k, a in enumerate(actions) if isinstance(a, GateCut)}

    all_keys = [seg.key for q in range(circuit.num_qubits) for seg in segments[q]]
    blocks = UnionFind(all_keys)
    for index, gate in enumerate(circuit.gates):
        if gate.is_two_qubit and index not in gate_cuts:
            a, b = gate.qubits
            blocks.union(_segment_at(segments[a], index).key, _segment_at(segments[b], index).key)

    groups = sorted((sorted(group) for group in blocks.to_sets()), key=lambda g: g[0])
    block_of = {key: i for i, group in enumerate(groups) for key in group}
    frag_qubit = {key: group.index(key) for group in groups for key in group}
    widths = [len(group) for group in groups]

    if device_constraint is not None and max(widths) > device_constraint:
        raise InvalidStrategyError(
            f"subcircuit width {max(widths)} exceeds device constraint {device_constraint}",
            details={'widths': widths, 'device_constraint': device_constraint}
        )

    frag_gates: List[List[Gate]] = [[] for _ in groups]
    incident: List[List[IncidentCut]] = [[] for _ in groups]
    wire_cuts_after: Dict[int, List[Tuple[int, WireCut]]] = {}
    for k, action in enumerate(actions):
        if isinstance(action, WireCut):
            wire_cuts_after.setdefault(action.position, []).append((k, action))

    def place(key: Tuple[int, int]) -> Tuple[int, int]:
        return block_of[key], frag_qubit[key]

    for index, gate in enumerate(circuit.gates):
        if gate.is_directive:
            continue
        keys = [_segment_at(segments[q], index).key for q in gate.qubits]
        if index in gate_cuts:
            k = gate_cuts[index]
            for key, side in zip(keys, ('left', 'right')):
                block, fq = place(key)
                frag_gates[block].append(
                    Gate(GateKind.BARRIER, (fq,), tag=f"c{k}.{'L' if side == 'left' else 'R'}")
                )
                incident[block].append(IncidentCut(k, actions[k], side, fq))
        else:
            block = block_of[keys[0]]
            frag_gates[block].append(Gate(gate.kind, tuple(frag_qubit[key] for key in keys), gate.params))

        for k, cut in wire_cuts_after.get(index, []):
            upstream = _segment_at(segments[cut.qubit], index)
            downstream = segments[cut.qubit][upstream.index + 1]
            block, fq = place(upstream.key)
            frag_gates[block].append(Gate(GateKind.MEASURE, (fq,), tag=f"c{k}.M"))
            incident[block].append(IncidentCut(k, cut, 'upstream', fq))
            block, fq = place(downstream.key)
            frag_gates[block].append(Gate(GateKind.BARRIER, (fq,), tag=f"c{k}.P"))
            incident[block].append(IncidentCut(k, cut, 'downstream', fq))

    for q in range(circuit.num_qubits):
        block, fq = place(segments[q][-1].key)
        frag_gates[block].append(Gate(GateKind.MEASURE, (fq,)))

    segment_lookup = {seg.key: seg for q in segments for seg in segments[q]}
    subcircuits = tuple(
        Subcircuit(
            index=i,
            circuit=Circuit(len(group), tuple(frag_gates[i]), name=f"{circuit.name}_frag{i}"),
            segments=tuple(segment_lookup[key] for key in group),
            incident_cuts=tuple(incident[i]),
        )
        for i, group in enumerate(groups)
    )
    return CutStrategy(
        circuit=circuit,
        actions=actions,
        device_constraint=device_constraint if device_constraint is not None else max(widths),
        subcircuits=subcircuits,
    )


@dataclass(frozen=True)
class _TwoQubitOp:
    index: int
    a: int
    b: int
    cuttable: bool
    position_a: int
    position_b: int
    prior_a: bool
    prior_b: bool


def _two_qubit_ops(circuit: Circuit) -> List[_TwoQubitOp]:
    last_op: Dict[int, int] = {}
    seen_two_qubit = set()
    ops = []
    for index, gate in enumerate(circuit.gates):
        if gate.is_directive:
            continue
        if gate.is_two_qubit:
            a, b = gate.qubits
            ops.append(_TwoQubitOp(
                index=index, a=a, b=b,
                cuttable=gate.kind in CUTTABLE_KINDS,
                position_a=last_op.get(a, -1), position_b=last_op.get(b, -1),
                prior_a=a in seen_two_qubit, prior_b=b in seen_two_qubit,
            ))
            seen_two_qubit.update(gate.qubits)
        for q in gate.qubits:
            last_op[q] = index
    return ops


def _canonical(labels: Sequence[int], widths: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    remap: Dict[int, int] = {}
    new_labels = []
    for label in labels:
        if label not in remap:
            remap[label] = len(remap)
        new_labels.append(remap[label])
    new_widths = [0] * len(remap)
    for old, new in remap.items():
        new_widths[new] = widths[old]
    return tuple(new_labels), tuple(new_widths)


class _CutSearch:
    """Best-first search over block structures"""

    def __init__(self, circuit: Circuit, device_constraint: int):
        self.circuit = circuit
        self.d = device_constraint
        self.ops = _two_qubit_ops(circuit)
        self._h_cache: Dict[Tuple, int] = {}
        self.expansions = 0

    def heuristic(self, idx: int, labels: Tuple[int, ...], widths: Tuple[int, ...]) -> int:
        """9 if merging every remaining gate would overflow a block, else 1"""
        key = (idx, labels, widths)
        cached = self._h_cache.get(key)
        if cached is not None:
            return cached
        parent = list(range(len(widths)))
        size = list(widths)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        value = 1
        for op in self.ops[idx:]:
            ra, rb = find(labels[op.a]), find(labels[op.b])
            if ra != rb:
                if size[ra] + size[rb] > self.d:
                    value = GATE_CUT_COST
                    break
                parent[rb] = ra
                size[ra] += size[rb]
        self._h_cache[key] = value
        return value

    def successors(self, idx: int, labels: Tuple[int, ...],
                   widths: Tuple[int, ...]) -> Iterator[Tuple[Tuple, Tuple, int, Tuple[CutAction, ...]]]:
        op = self.ops[idx]
        la, lb = labels[op.a], labels[op.b]
        if la == lb:
            yield labels, widths, 1, ()
            return

        if widths[la] + widths[lb] <= self.d:
            merged = [la if label == lb else label for label in labels]
            new_widths = list(widths)
            new_widths[la] += widths[lb]
            yield (*_canonical(merged, new_widths), 1, ())

        if op.cuttable:
            yield labels, widths, GATE_CUT_COST, (GateCut(op.index),)

        for qubit, prior, position, target in ((op.a, op.prior_a, op.position_a, lb),
                                               (op.b, op.prior_b, op.position_b, la)):
            if prior and widths[target] + 1 <= self.d:
                moved = list(labels)
                moved[qubit] = target
                new_widths = list(widths)
                new_widths[target] += 1
                yield (*_canonical(moved, new_widths), WIRE_CUT_COST, (WireCut(qubit, position),))

        if op.prior_a and op.prior_b and self.d >= 2:
            fresh = len(widths)
            moved = list(labels)
            moved[op.a] = fresh
            moved[op.b] = fresh
            yield (
                *_canonical(moved, list(widths) + [2]),
                WIRE_CUT_COST * WIRE_CUT_COST,
                (WireCut(op.a, op.position_a), WireCut(op.b, op.position_b)),
            )

    def greedy_completion(self, idx: int, labels: Tuple[int, ...], widths: Tuple[int, ...],
                          actions: Tuple[CutAction, ...]) -> Optional[Tuple[CutAction, ...]]:
        """Finish a partial solution taking the first admissible option per gate"""
        while idx < len(self.ops):
            options = list(self.successors(idx, labels, widths))
            if not options:
                return None
            labels, widths, _, extra = options[0]
            actions = actions + extra
            idx += 1
        return actions

    def run(self, k_max: Optional[int], max_expansions: int) -> Tuple[Optional[Tuple[CutAction, ...]], bool]:
        """Return (actions or None, completed_exactly)"""
        n = self.circuit.num_qubits
        start = (tuple(range(n)), (1,) * n)
        budget_bound = WIRE_CUT_COST ** k_max if k_max is not None else None
        counter = itertools.count()
        best: Dict[Tuple, Tuple] = {}
        heap: List[Tuple] = []

        def push(idx, labels, widths, cost, actions):
            key = (idx, labels, widths)
            action_key = tuple(sorted(a.sort_key for a in actions))
            rank = (cost, len(actions), action_key)
            if key in best and best[key] <= rank:
                return
            best[key] = rank
            f = cost * (self.heuristic(idx, labels, widths) if idx < len(self.ops) else 1)
            heapq.heappush(heap, (f, cost, len(actions), action_key, next(counter), idx, labels, widths, actions))

        push(0, start[0], start[1], 1, ())
        while heap:
            f, cost, n_actions, action_key, _, idx, labels, widths, actions = heapq.heappop(heap)
            if best.get((idx, labels, widths)) != (cost, n_actions, action_key):
                continue
            if budget_bound is not None and f > budget_bound:
                return None, True
            if idx == len(self.ops):
                return actions, True
            self.expansions += 1
            if self.expansions > max_expansions:
                logger.warning(
                    "Cut search hit the expansion limit, completing greedily",
                    extra={'device_constraint': self.d, 'expansions': max_expansions, 'gate_position': idx}
                )
                return self.greedy_completion(idx, labels, widths, actions), False
            for new_labels, new_widths, factor, extra in self.successors(idx, labels, widths):
                push(idx + 1, new_labels, new_widths, cost * factor, actions + extra)
        return None, True


@LoggingUtils.log_performance(level='DEBUG', threshold_seconds=0.5)
def find_cuts(circuit: Circuit, device_constraint: int, k_max: Optional[int] = None,
              max_expansions: int = 100_000) -> Optional[CutStrategy]:
    """Cheapest gate/wire cut strategy whose subcircuits fit the constraint

    The budget ``k_max`` filters the unbudgeted optimum: a strategy is returned
    only if the cheapest one found uses at most ``k_max`` actions.

    Args:
        circuit: Circuit to cut
        device_constraint: Maximum subcircuit width d
        k_max: Cut budget (None for unbounded)
        max_expansions: Search states expanded before greedy completion

    Returns:
        Optional[CutStrategy]: Strategy, or None if none satisfies both limits
    """
    if device_constraint < 1:
        raise InvalidParameterError('device_constraint', "must be at least 1", value=device_constraint)
    if k_max is not None and k_max < 1:
        raise InvalidParameterError('k_max', "must be at least 1", value=k_max)
    _check_measurements(circuit)

    if device_constraint >= circuit.num_qubits:
        return apply_cuts(circuit, (), device_constraint)

    search = _CutSearch(circuit, device_constraint)
    actions, exact = search.run(k_max, max_expansions)
    if actions is None:
        logger.info(
            "No cut strategy within limits",
            extra={'device_constraint': device_constraint, 'k_max': k_max, 'expansions': search.expansions}
        )
        return None
    if k_max is not None and len(actions) > k_max:
        logger.info(
            "Cheapest strategy exceeds the cut budget",
            extra={'device_constraint': device_constraint, 'k_max': k_max, 'num_cuts': len(actions)}
        )
        return None

    strategy = apply_cuts(circuit, actions, device_constraint)
    logger.info(
        "Found cut strategy",
        extra={'device_constraint': device_constraint, 'gate_cuts': strategy.num_gate_cuts,
               'wire_cuts': strategy.num_wire_cuts, 'cost': strategy.canonical_executions,
               'expansions': search.expansions, 'exact': exact}
    )
    return strategy


def _candidate_actions(circuit: Circuit) -> Tuple[List[GateCut], List[WireCut]]:
    ops = _two_qubit_ops(circuit)
    gate_candidates = [GateCut(op.index) for op in ops if op.cuttable]
    wire_candidates = set()
    for op in ops:
        if op.prior_a:
            wire_candidates.add(WireCut(op.a, op.position_a))
        if op.prior_b:
            wire_candidates.add(WireCut(op.b, op.position_b))
    return gate_candidates, sorted(wire_candidates, key=lambda w: w.sort_key)


def _max_block_width(circuit: Circuit, ops: List[_TwoQubitOp], gate_cuts: Sequence[GateCut],
                     wire_cuts: Sequence[WireCut]) -> int:
    cut_gates = {g.gate_index for g in gate_cuts}
    positions: Dict[int, List[int]] = {}
    for w in wire_cuts:
        positions.setdefault(w.qubit, []).append(w.position)
    keys = [(q, s) for q in range(circuit.num_qubits) for s in range(len(positions.get(q, [])) + 1)]
    blocks = UnionFind(keys)
    for op in ops:
        if op.index in cut_gates:
            continue
        seg_a = sum(p < op.index for p in positions.get(op.a, ()))
        seg_b = sum(p < op.index for p in positions.get(op.b, ()))
        blocks.union((op.a, seg_a), (op.b, seg_b))
    return max(len(group) for group in blocks.to_sets())


@LoggingUtils.log_performance(level='DEBUG', threshold_seconds=0.5)
def oracle_min_cuts(circuit: Circuit, device_constraint: int, max_actions: int = 5,
                    cap: int = 2_000_000) -> Optional[CutStrategy]:
    """Provably cheapest strategy with at most ``max_actions`` actions

    Enumerates (gate cuts, wire cuts) count pairs in increasing cost and,
    within each pair, action sets in lexicographic order.

    Args:
        circuit: Circuit to cut
        device_constraint: Maximum subcircuit width d
        max_actions: Largest action set considered
        cap: Maximum number of action sets examined

    Returns:
        Optional[CutStrategy]: Minimum-cost strategy, or None
    """
    if device_constraint < 1:
        raise InvalidParameterError('device_constraint', "must be at least 1", value=device_constraint)
    _check_measurements(circuit)
    if device_constraint >= circuit.num_qubits:
        return apply_cuts(circuit, (), device_constraint)

    ops = _two_qubit_ops(circuit)
    gate_candidates, wire_candidates = _candidate_actions(circuit)
    pairs = sorted(
        ((g, w) for g in range(max_actions + 1) for w in range(max_actions + 1 - g)),
        key=lambda p: canonical_executions(*p)
    )

    explored = 0
    for g, w in pairs:
        if g > len(gate_candidates) or w > len(wire_candidates):
            continue
        explored += math.comb(len(gate_candidates), g) * math.comb(len(wire_candidates), w)
        if explored > cap:
            raise OracleBudgetExceededError(explored, cap)
        for gate_set in itertools.combinations(gate_candidates, g):
            for wire_set in itertools.combinations(wire_candidates, w):
                if _max_block_width(circuit, ops, gate_set, wire_set) <= device_constraint:
                    logger.info(
                        "Oracle found minimum strategy",
                        extra={'device_constraint': device_constraint, 'gate_cuts': g,
                               'wire_cuts': w, 'explored': explored}
                    )
                    return apply_cuts(circuit, gate_set + wire_set, device_constraint)
    return None


def strategy_document(strategy: CutStrategy) -> Dict[str, Any]:
    """Serializable form of a strategy (circuit embedded as QASM)"""
    return {
        'circuit_name': strategy.circuit.name,
        'circuit_qasm': emit_qasm(strategy.circuit),
        'device_constraint': strategy.device_constraint,
        'actions': [a.to_dict() for a in strategy.actions],
    }


def strategy_from_document(document: Dict[str, Any]) -> CutStrategy:
    """Rebuild a strategy written by ``strategy_document``"""
    try:
        circuit = parse_qasm(document['circuit_qasm'], name=document.get('circuit_name', 'circuit'))
        actions = [action_from_dict(a) for a in document['actions']]
        device_constraint = document.get('device_constraint')
    except (KeyError, TypeError) as e:
        raise InvalidStrategyError(f"malformed strategy document: missing {e}") from e
    return apply_cuts(circuit, actions, device_constraint)
