"""Tests for candidate sweep, winner selection and the baseline comparison"""

import pytest

from hic.core.cut_finder import find_cuts
from hic.core.generators import gen_ising_1d, gen_qaoa_mirrored, gen_random_clifford, ring_edges
from hic.core.hardware import NoiseLaw, gen_topology
from hic.core.layout import place_circuit
from hic.core.puncture import candidate_constraints
from hic.services.selector_service import (
    CandidateEvaluation, SelectionResult, SelectorService, compare, compare_with_baseline, evaluate_candidate,
    pick_winner, select
)
from hic.utils.config_utils import HICConfig
from hic.utils.exceptions import ConfigurationError, InvalidParameterError


@pytest.mark.unit
class TestSelect:

    def test_uncut_circuit_fits_an_island(self, ising4, split_line_snapshot, config):
        result = SelectorService(config).select(ising4, split_line_snapshot)
        assert result.punctured.component_sizes == [4, 4]
        assert [c.device_constraint for c in result.all_candidates] == [4]
        winner = result.winner
        assert winner.feasible
        assert winner.strategy.num_cuts == 0
        assert winner.strategy.canonical_executions == 1
        assert 4 not in winner.placements[0].layout.mapping.values()

    def test_cut_circuit_avoids_the_outlier(self, ising6, split_line_snapshot):
        result = select(ising6, split_line_snapshot, 2.0, 2.0, 4)
        winner = result.winner
        assert winner is not None
        assert winner.strategy.num_cuts > 0
        assert max(winner.strategy.widths) <= 4
        used = {q for p in winner.placements for q in p.layout.mapping.values()}
        assert 4 not in used
        assert winner.weighted_score == pytest.approx(winner.objective)

    def test_budget_exhausted(self, ising6, split_line_snapshot):
        result = select(ising6, split_line_snapshot, 2.0, 2.0, 1)
        assert result.winner is None
        assert all(not c.feasible and c.reason for c in result.all_candidates)

    def test_thresholds_required(self, ising4, split_line_snapshot):
        with pytest.raises(ConfigurationError):
            SelectorService(HICConfig()).select(ising4, split_line_snapshot)

    def test_invalid_budget(self, ising4, split_line_snapshot, config):
        with pytest.raises(InvalidParameterError):
            SelectorService(config).select(ising4, split_line_snapshot, k_max=0)

    def test_parallel_sweep_matches_serial(self, ising6, qaoa_snapshot, config):
        serial = SelectorService(config).select(ising6, qaoa_snapshot)
        config.selection.jobs = 2
        parallel = SelectorService(config).select(ising6, qaoa_snapshot)
        assert [c.device_constraint for c in serial.all_candidates] == [4, 5, 6, 7, 8]
        assert parallel.winner.device_constraint == serial.winner.device_constraint
        assert parallel.winner.objective == pytest.approx(serial.winner.objective)


@pytest.mark.unit
class TestPickWinner:

    def test_ties_prefer_fewer_executions(self, ising4):
        uncut = find_cuts(ising4, 4)
        cut = find_cuts(ising4, 2)
        candidates = [
            CandidateEvaluation(2, strategy=cut, objective=0.1, feasible=True),
            CandidateEvaluation(4, strategy=uncut, objective=0.1, feasible=True),
        ]
        assert pick_winner(candidates).device_constraint == 4

    def test_lower_objective_wins(self, ising4):
        uncut = find_cuts(ising4, 4)
        cut = find_cuts(ising4, 2)
        candidates = [
            CandidateEvaluation(2, strategy=cut, objective=0.05, feasible=True),
            CandidateEvaluation(4, strategy=uncut, objective=0.1, feasible=True),
            CandidateEvaluation(3, reason="no strategy within the cut budget"),
        ]
        assert pick_winner(candidates).device_constraint == 2

    def test_nothing_feasible(self):
        assert pick_winner([CandidateEvaluation(3, reason="none")]) is None


@pytest.mark.unit
class TestBaselineComparison:

    def test_equal_partition_baseline(self, ising6, split_line_snapshot):
        comparison = compare_with_baseline(ising6, split_line_snapshot, 2.0, 2.0, 4)
        winner = comparison.selection.winner
        baseline = comparison.baseline
        assert baseline.device_constraint == 3
        assert baseline.feasible
        assert max(baseline.strategy.widths) <= 3
        assert comparison.delta_cuts == baseline.strategy.num_cuts - winner.strategy.num_cuts
        assert comparison.execution_ratio == pytest.approx(
            baseline.strategy.canonical_executions / winner.strategy.canonical_executions
        )
        assert comparison.selection.baseline is baseline

    def test_no_winner_is_noted(self, split_line_snapshot):
        selection = SelectionResult(punctured=None, winner=None)
        comparison = compare(selection, None)
        assert comparison.delta_cuts is None
        assert comparison.notes == ["no winner"]


@pytest.mark.slow
@pytest.mark.integration
def test_mirrored_qaoa_on_snapshot(qaoa_snapshot, config):
    circuit = gen_qaoa_mirrored(8, ring_edges(range(8)))
    result = SelectorService(config).select(circuit, qaoa_snapshot)
    assert result.winner is not None
    used = {q for p in result.winner.placements for q in p.layout.mapping.values()}
    assert 8 not in used


SWEEP_CIRCUITS = [
    gen_ising_1d(4, 1),
    gen_ising_1d(5, 1),
    gen_ising_1d(6, 1),
    gen_random_clifford(5, 2, seed=3, cx_density=0.8),
    gen_qaoa_mirrored(4, ring_edges(range(4))),
]

SWEEP_DEVICES = [
    ('line', 1, {'n': 9}),
    ('line', 2, {'n': 12}),
    ('grid', 3, {'rows': 3, 'cols': 3}),
    ('grid', 4, {'rows': 3, 'cols': 4}),
    ('heavy_hex', 5, {'cells': 1}),
]


def sweep_device(kind, seed, size):
    return gen_topology(kind, seed, NoiseLaw(outlier_fraction=0.1), **size)


def summary(result):
    return [
        (c.device_constraint, c.feasible, c.objective, c.strategy.actions if c.strategy else None)
        for c in result.all_candidates
    ]


@pytest.mark.unit
class TestSelectionProperties:

    @pytest.mark.parametrize('circuit', SWEEP_CIRCUITS, ids=lambda c: c.name)
    @pytest.mark.parametrize('kind, seed, size', SWEEP_DEVICES)
    def test_sweep_covers_every_constraint(self, circuit, kind, seed, size, config):
        snapshot = sweep_device(kind, seed, size)
        result = SelectorService(config).select(circuit, snapshot, k_max=5)
        constraints = candidate_constraints(result.punctured)
        assert [c.device_constraint for c in result.all_candidates] == constraints
        for candidate in result.all_candidates:
            assert candidate.feasible or candidate.reason
            if candidate.feasible:
                assert max(candidate.strategy.widths) <= candidate.device_constraint
                assert len(candidate.placements) == len(candidate.strategy.subcircuits)
        feasible = [c for c in result.all_candidates if c.feasible]
        assert (result.winner is None) == (not feasible)

    @pytest.mark.parametrize('circuit', SWEEP_CIRCUITS, ids=lambda c: c.name)
    @pytest.mark.parametrize('kind, seed, size', SWEEP_DEVICES[:3])
    def test_winner_beats_every_constraint_and_placement(self, circuit, kind, seed, size, config):
        snapshot = sweep_device(kind, seed, size)
        result = SelectorService(config).select(circuit, snapshot, k_max=5)
        components = result.punctured.components

        evaluations = [
            evaluate_candidate(circuit, d, components, snapshot.noise, 5)
            for d in candidate_constraints(result.punctured)
        ]
        feasible = [e for e in evaluations if e.feasible]
        if not feasible:
            assert result.winner is None
            return
        best = min(feasible, key=lambda e: (e.objective, e.strategy.canonical_executions, e.device_constraint))
        assert result.winner.device_constraint == best.device_constraint
        assert result.winner.objective == pytest.approx(min(e.objective for e in feasible))

        for sub, chosen in zip(result.winner.strategy.subcircuits, result.winner.placements):
            scores = [p.score for p in (place_circuit(sub.circuit, c, snapshot.noise) for c in components) if p]
            assert chosen.score == pytest.approx(min(scores))

    @pytest.mark.parametrize('snapshot_fixture', ['split_line_snapshot', 'qaoa_snapshot'])
    def test_larger_budget_never_worsens_the_winner(self, ising6, snapshot_fixture, config, request):
        snapshot = request.getfixturevalue(snapshot_fixture)
        service = SelectorService(config)
        previous = None
        for k_max in range(1, 7):
            result = service.select(ising6, snapshot, k_max=k_max)
            feasible = {c.device_constraint for c in result.all_candidates if c.feasible}
            if previous is not None:
                assert previous[0] <= feasible
                if previous[1] is not None:
                    assert result.winner is not None
                    assert result.winner.objective <= previous[1] + 1e-12
            previous = (feasible, result.winner.objective if result.winner else None)
        assert previous[1] is not None

    @pytest.mark.parametrize('circuit, snapshot_fixture', [
        (gen_ising_1d(6, 2), 'qaoa_snapshot'),
        (gen_random_clifford(6, 2, seed=5, cx_density=0.8), 'qaoa_snapshot'),
        (gen_qaoa_mirrored(4, ring_edges(range(4))), 'split_line_snapshot'),
    ])
    def test_worker_count_does_not_change_the_result(self, circuit, snapshot_fixture, config, request):
        snapshot = request.getfixturevalue(snapshot_fixture)
        outcomes = []
        for jobs in (1, 4, 8):
            config.selection.jobs = jobs
            result = SelectorService(config).select(circuit, snapshot, k_max=6)
            winner = result.winner.device_constraint if result.winner else None
            outcomes.append((winner, summary(result)))
        assert outcomes[0] == outcomes[1] == outcomes[2]
