"""Tests for cut application and the cut search"""

import pytest

from hic.core.circuit import Circuit, Gate, GateKind
from hic.core.cut_finder import (
    GateCut, WireCut, action_from_dict, apply_cuts, canonical_executions, equal_partition_constraint,
    find_cuts, oracle_min_cuts, overhead, strategy_document, strategy_from_document
)
from hic.core.generators import gen_ising_1d, gen_qaoa_mirrored, gen_random_clifford, ring_edges
from hic.utils.exceptions import (
    InvalidParameterError, InvalidStrategyError, OracleBudgetExceededError, UnsupportedCutError, ValidationError
)


@pytest.fixture
def two_cx():
    return Circuit(3, (Gate(GateKind.CX, (0, 1)), Gate(GateKind.CX, (1, 2))), name='two_cx')


@pytest.mark.unit
class TestApplyCuts:

    def test_no_cuts_keeps_one_fragment(self, ising4):
        strategy = apply_cuts(ising4, ())
        assert strategy.widths == [4]
        assert strategy.device_constraint == 4
        final = [g for g in strategy.subcircuits[0].circuit.gates if g.kind == GateKind.MEASURE]
        assert len(final) == 4

    def test_gate_cut_leaves_tagged_placeholders(self, two_cx):
        strategy = apply_cuts(two_cx, [GateCut(1)])
        assert strategy.widths == [2, 1]
        left, right = strategy.subcircuits
        assert [g.tag for g in left.circuit.gates if g.tag] == ['c0.L']
        assert [g.tag for g in right.circuit.gates if g.tag] == ['c0.R']
        assert [(c.side, c.fragment_qubit) for c in left.incident_cuts] == [('left', 1)]

    def test_wire_cut_splits_a_qubit(self, two_cx):
        strategy = apply_cuts(two_cx, [WireCut(qubit=1, position=0)])
        assert strategy.widths == [2, 2]
        upstream, downstream = strategy.subcircuits
        assert [(g.kind, g.qubits, g.tag) for g in upstream.circuit.gates] == [
            (GateKind.CX, (0, 1), None),
            (GateKind.MEASURE, (1,), 'c0.M'),
            (GateKind.MEASURE, (0,), None),
        ]
        assert [(g.kind, g.tag) for g in downstream.circuit.gates] == [
            (GateKind.BARRIER, 'c0.P'),
            (GateKind.CX, None),
            (GateKind.MEASURE, None),
            (GateKind.MEASURE, None),
        ]
        assert upstream.terminal_qubits == {0: 0}
        assert downstream.terminal_qubits == {1: 0, 2: 1}

    def test_wire_cut_must_lie_between_gates(self, two_cx):
        with pytest.raises(InvalidStrategyError):
            apply_cuts(two_cx, [WireCut(qubit=1, position=1)])
        with pytest.raises(InvalidStrategyError):
            apply_cuts(two_cx, [WireCut(qubit=0, position=1)])

    def test_invalid_gate_cuts(self):
        circuit = Circuit(2, (Gate(GateKind.H, (0,)), Gate(GateKind.SWAP, (0, 1))))
        with pytest.raises(InvalidStrategyError):
            apply_cuts(circuit, [GateCut(0)])
        with pytest.raises(UnsupportedCutError):
            apply_cuts(circuit, [GateCut(1)])
        with pytest.raises(InvalidStrategyError):
            apply_cuts(circuit, [GateCut(7)])

    def test_duplicate_action(self, two_cx):
        with pytest.raises(InvalidStrategyError):
            apply_cuts(two_cx, [GateCut(0), GateCut(0)])

    def test_width_above_constraint(self, ising4):
        with pytest.raises(InvalidStrategyError):
            apply_cuts(ising4, [GateCut(0)], device_constraint=2)

    def test_mid_circuit_measurement_rejected(self):
        circuit = Circuit(2, (Gate(GateKind.MEASURE, (0,)), Gate(GateKind.CX, (0, 1))))
        with pytest.raises(ValidationError):
            apply_cuts(circuit, ())

    def test_action_dict_round_trip(self):
        for action in (GateCut(3), WireCut(2, 5)):
            assert action_from_dict(action.to_dict()) == action
        with pytest.raises(InvalidStrategyError):
            action_from_dict({'type': 'teleport'})


@pytest.mark.unit
class TestFindCuts:

    def test_cheapest_split_of_small_chain(self, ising4):
        strategy = find_cuts(ising4, 2)
        assert strategy.actions == (GateCut(1), GateCut(8))
        assert strategy.widths == [2, 2]
        assert strategy.canonical_executions == 81

    def test_budget_filters_the_optimum(self, ising4):
        assert find_cuts(ising4, 2, k_max=1) is None
        assert find_cuts(ising4, 2, k_max=2) is not None

    def test_wide_constraint_needs_no_cut(self, ising4):
        strategy = find_cuts(ising4, 4)
        assert strategy.num_cuts == 0
        assert strategy.widths == [4]

    def test_every_fragment_fits(self, ising6):
        for d in (2, 3, 4, 5):
            strategy = find_cuts(ising6, d)
            assert max(strategy.widths) <= d

    def test_invalid_arguments(self, ising4):
        with pytest.raises(InvalidParameterError):
            find_cuts(ising4, 0)
        with pytest.raises(InvalidParameterError):
            find_cuts(ising4, 2, k_max=0)

    def test_matches_oracle_on_small_chain(self, ising4):
        assert oracle_min_cuts(ising4, 2).actions == find_cuts(ising4, 2).actions

    @pytest.mark.parametrize('d, expected', [(3, (4, 0, 6561)), (4, (2, 1, 1296))])
    def test_brick_ising_minimum(self, d, expected):
        """Minimum cut table for the 6-qubit, 2-step Ising chain

        The table holds for the CX-RZ-CX form with brick ordering. The
        sequential RZZ chain cuts more cheaply (4 gate cuts, 6561 executions
        at d=2), so it does not reproduce these counts.
        """
        circuit = gen_ising_1d(6, 2, interaction='cx', ordering='brick')
        strategy = find_cuts(circuit, d)
        assert (strategy.num_gate_cuts, strategy.num_wire_cuts, strategy.canonical_executions) == expected

    @pytest.mark.slow
    def test_brick_ising_oracle(self):
        """Exhaustive search agrees on the CX-RZ-CX brick-ordered chain"""
        circuit = gen_ising_1d(6, 2, interaction='cx', ordering='brick')
        strategy = oracle_min_cuts(circuit, 4)
        assert strategy.canonical_executions == 1296


@pytest.mark.unit
class TestOracle:

    def test_cap(self, ising6):
        with pytest.raises(OracleBudgetExceededError):
            oracle_min_cuts(ising6, 2, max_actions=5, cap=10)

    def test_none_within_action_limit(self, ising6):
        assert oracle_min_cuts(ising6, 1, max_actions=1) is None


@pytest.mark.unit
class TestOverhead:

    def test_gate_cuts(self, ising4):
        report = overhead(find_cuts(ising4, 2))
        assert report.gamma == 9
        assert report.canonical_executions == 81
        assert report.actual_subexperiments == 50

    def test_wire_cut(self, two_cx):
        report = overhead(apply_cuts(two_cx, [WireCut(1, 0)]))
        assert (report.num_gate_cuts, report.num_wire_cuts) == (0, 1)
        assert report.gamma == 4
        assert report.canonical_executions == 16
        assert report.actual_subexperiments == 9

    def test_canonical_executions(self):
        assert canonical_executions(8, 0) == 43_046_721
        assert canonical_executions(2, 1) == 1296


@pytest.mark.unit
def test_equal_partition_constraint(ising4):
    assert equal_partition_constraint(ising4) == 2
    assert equal_partition_constraint(gen_ising_1d(7, 1)) == 4


@pytest.mark.unit
def test_strategy_document_round_trip(ising4):
    strategy = find_cuts(ising4, 2)
    rebuilt = strategy_from_document(strategy_document(strategy))
    assert rebuilt.actions == strategy.actions
    assert rebuilt.widths == strategy.widths
    with pytest.raises(InvalidStrategyError):
        strategy_from_document({'actions': []})


# any strategy with six or more actions costs at least this much
SIX_ACTION_FLOOR = canonical_executions(6, 0)


def assert_matches_oracle(circuit, d, cap):
    try:
        exhaustive = oracle_min_cuts(circuit, d, max_actions=5, cap=cap)
    except OracleBudgetExceededError:
        pytest.skip(f"exhaustive search too large for {circuit.name} at d={d}")
    found = find_cuts(circuit, d, max_expansions=1_000_000)
    if exhaustive is None:
        assert found.num_cuts > 5
    elif exhaustive.canonical_executions < SIX_ACTION_FLOOR:
        assert found.canonical_executions == exhaustive.canonical_executions
    else:
        assert found.canonical_executions <= exhaustive.canonical_executions
    assert max(found.widths) <= d


@pytest.mark.unit
class TestCutSearchProperties:

    def test_bell_pair_on_single_qubits(self):
        bell = Circuit(2, (Gate(GateKind.H, (0,)), Gate(GateKind.CX, (0, 1))), name='bell')
        strategy = find_cuts(bell, 1)
        assert strategy.actions == (GateCut(1),)
        assert strategy.canonical_executions == 9
        assert oracle_min_cuts(bell, 1).canonical_executions == 9

    @pytest.mark.parametrize('circuit', [
        gen_ising_1d(6, 2),
        gen_ising_1d(7, 1),
        gen_random_clifford(6, 3, seed=1),
        gen_random_clifford(7, 2, seed=2, cx_density=0.8),
        gen_qaoa_mirrored(4, ring_edges(range(4))),
    ], ids=lambda c: c.name)
    def test_larger_constraint_never_costs_more(self, circuit):
        costs = [find_cuts(circuit, d).canonical_executions for d in range(2, circuit.num_qubits + 1)]
        assert costs == sorted(costs, reverse=True)
        assert costs[-1] == 1

    @pytest.mark.parametrize('n', [4, 5, 6])
    @pytest.mark.parametrize('seed', range(4))
    def test_random_clifford_matches_oracle(self, n, seed):
        circuit = gen_random_clifford(n, 2, seed=seed, cx_density=0.8)
        for d in range(2, n):
            assert_matches_oracle(circuit, d, cap=200_000)

    @pytest.mark.parametrize('n', [4, 5, 6])
    def test_ising_matches_oracle(self, n):
        circuit = gen_ising_1d(n, 1)
        for d in range(2, n):
            assert_matches_oracle(circuit, d, cap=200_000)

    @pytest.mark.slow
    @pytest.mark.parametrize('n', [7, 8])
    @pytest.mark.parametrize('seed', range(3))
    def test_wider_random_clifford_matches_oracle(self, n, seed):
        circuit = gen_random_clifford(n, 2, seed=seed, cx_density=0.7)
        for d in range(n // 2, n):
            assert_matches_oracle(circuit, d, cap=2_000_000)
