"""Tests for routing, layout scores and the selection objective"""

import math

import pytest

from hic.core.circuit import Circuit, Gate, GateKind
from hic.core.cut_finder import find_cuts
from hic.core.hardware import parse_calibration
from hic.core.layout import (
    Layout, ObjectiveInputs, ScoredPlacement, decompose_native, full_objective, layout_score, norm_correlation,
    objective_terms, place_and_route, place_circuit, route, weighted_score
)
from hic.core.puncture import Component, full_map_component, puncture
from hic.utils.exceptions import DegenerateVarianceError, EmptyInputError, InvalidParameterError, UnmappedOpError
from conftest import line_calibration


def scored(width, score):
    layout = Layout(
        mapping={q: q for q in range(width)},
        component_id=0,
        routed=Circuit(width),
        physical_qubits=frozenset(range(width)),
        allowed_edges=frozenset(),
    )
    return ScoredPlacement(layout=layout, score=score, width=width)


@pytest.fixture
def bell():
    return Circuit(2, (
        Gate(GateKind.H, (0,)),
        Gate(GateKind.CX, (0, 1)),
        Gate(GateKind.MEASURE, (0,)),
        Gate(GateKind.MEASURE, (1,)),
    ), name='bell')


@pytest.mark.unit
class TestRouting:

    def test_decompose_native(self):
        circuit = Circuit(2, (
            Gate(GateKind.RZZ, (0, 1), (0.2,)),
            Gate(GateKind.CZ, (0, 1)),
            Gate(GateKind.SWAP, (0, 1)),
        ))
        assert decompose_native(circuit).count_ops() == {'cx': 6, 'rz': 1, 'h': 2}

    def test_adjacent_mapping_needs_no_swap(self, bell, line6_snapshot):
        component = full_map_component(line6_snapshot, 0)
        layout = route(bell, {0: 3, 1: 4}, component, line6_snapshot.noise)
        assert layout.swaps == 0
        assert layout.routed.gates[1] == Gate(GateKind.CX, (3, 4))
        assert layout.final_mapping == {0: 3, 1: 4}

    def test_distant_operands_are_swapped_together(self, line6_snapshot):
        circuit = Circuit(2, (Gate(GateKind.CX, (0, 1)),))
        component = full_map_component(line6_snapshot, 0)
        layout = route(circuit, {0: 0, 1: 2}, component, line6_snapshot.noise)
        assert layout.swaps == 1
        assert [g.qubits for g in layout.routed.gates] == [(0, 1), (1, 0), (0, 1), (1, 2)]
        assert layout.mapping == {0: 0, 1: 2}
        assert layout.final_mapping == {0: 1, 1: 2}

    def test_mapping_outside_component(self, bell):
        component = Component(0, frozenset({0, 1}), frozenset({(0, 1)}))
        snapshot = parse_calibration(line_calibration(3))
        with pytest.raises(UnmappedOpError):
            route(bell, {0: 0, 1: 2}, component, snapshot.noise)

    def test_mapping_must_be_injective(self):
        with pytest.raises(InvalidParameterError):
            Layout({0: 1, 1: 1}, 0, Circuit(2), frozenset({1}), frozenset())

    def test_placeholder_tags_survive(self, line6_snapshot):
        circuit = Circuit(2, (Gate(GateKind.BARRIER, (0,), tag='c0.L'), Gate(GateKind.CX, (0, 1))))
        layout = route(circuit, {0: 1, 1: 2}, full_map_component(line6_snapshot, 0), line6_snapshot.noise)
        assert layout.routed.gates[0].tag == 'c0.L'
        assert layout.routed.gates[0].qubits == (1,)


@pytest.mark.unit
class TestLayoutScore:

    def test_product_of_operation_fidelities(self, bell, line6_snapshot):
        component = full_map_component(line6_snapshot, 0)
        layout = route(bell, {0: 0, 1: 1}, component, line6_snapshot.noise)
        expected = 1.0 - (1 - 3e-4) * (1 - 0.01) * (1 - 0.01) ** 2
        assert layout_score(layout.routed, layout, line6_snapshot.noise) == pytest.approx(expected, abs=1e-15)

    def test_barriers_are_free(self, line6_snapshot):
        circuit = Circuit(1, (Gate(GateKind.BARRIER, (0,)),))
        layout = route(circuit, {0: 2}, full_map_component(line6_snapshot, 0), line6_snapshot.noise)
        assert layout_score(layout.routed, layout, line6_snapshot.noise) == 0.0

    def test_gate_on_unavailable_edge(self, line6_snapshot):
        routed = Circuit(3, (Gate(GateKind.CX, (0, 2)),))
        layout = Layout({0: 0, 1: 2}, 0, routed, frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)}))
        with pytest.raises(UnmappedOpError):
            layout_score(routed, layout, line6_snapshot.noise)

    def test_gate_outside_layout(self, line6_snapshot):
        routed = Circuit(4, (Gate(GateKind.H, (3,)),))
        layout = Layout({0: 0}, 0, routed, frozenset({0, 1}), frozenset({(0, 1)}))
        with pytest.raises(UnmappedOpError):
            layout_score(routed, layout, line6_snapshot.noise)


@pytest.mark.unit
class TestPlacement:

    def test_avoids_noisy_edge(self, bell):
        snapshot = parse_calibration(line_calibration(4, overrides={(0, 1): 0.05}))
        placement = place_circuit(bell, full_map_component(snapshot, 0), snapshot.noise)
        used = tuple(sorted(placement.layout.mapping.values()))
        assert used != (0, 1)
        assert placement.layout.swaps == 0
        assert placement.score == pytest.approx(1.0 - (1 - 3e-4) * (1 - 0.01) ** 3)

    def test_too_wide(self, ising4, split_line_snapshot):
        component = Component(0, frozenset({0, 1, 2}), frozenset({(0, 1), (1, 2)}))
        assert place_circuit(ising4, component, split_line_snapshot.noise) is None

    def test_place_and_route_subcircuit(self, ising4, split_line_snapshot):
        strategy = find_cuts(ising4, 2)
        punctured = puncture(split_line_snapshot, 2.0, 2.0)
        placement = place_and_route(strategy.subcircuits[0], punctured.components[1], split_line_snapshot.noise)
        assert placement.width == 2
        assert set(placement.layout.mapping.values()) <= {5, 6, 7, 8}
        assert 0.0 < placement.score < 1.0


@pytest.mark.unit
class TestObjective:

    @pytest.mark.parametrize('entries, expected', [
        ([(1, 0.4221), (1, 0.5186), (1, 0.4221)], 0.4542),
        ([(1, 0.4217), (2, 0.4353)], 0.4308),
    ])
    def test_weighted_score_of_tabulated_scores(self, entries, expected):
        placements = [scored(w, s) for w, s in entries]
        assert weighted_score(placements, 3) == pytest.approx(expected, abs=5e-4)

    def test_weighted_score_needs_placements(self):
        with pytest.raises(EmptyInputError):
            weighted_score([], 3)

    def test_norm_terms(self):
        placements = [scored(1, 0.2), scored(2, 0.3)]
        norm1, norm2 = objective_terms(ObjectiveInputs(placements, 3))
        assert norm1 == pytest.approx(0.8 / 3)
        assert norm2 == pytest.approx(((0.8 / 3 - 0.2) ** 2 + (0.8 / 3 - 0.6) ** 2) / 2)

    def test_alpha_blends_the_terms(self):
        placements = [scored(1, 0.2), scored(2, 0.3)]
        norm1, norm2 = objective_terms(ObjectiveInputs(placements, 3))
        assert full_objective(ObjectiveInputs(placements, 3, alpha=1.0)) == pytest.approx(norm1)
        assert full_objective(ObjectiveInputs(placements, 3, alpha=0.0)) == pytest.approx(norm2)
        assert full_objective(ObjectiveInputs(placements, 3, alpha=0.25)) == pytest.approx(
            0.25 * norm1 + 0.75 * norm2
        )
        with pytest.raises(InvalidParameterError):
            full_objective(ObjectiveInputs(placements, 3, alpha=1.5))


@pytest.mark.unit
class TestNormCorrelation:

    def test_linear_samples(self):
        assert norm_correlation([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)]) == pytest.approx(1.0)
        assert norm_correlation([(0.1, 3.0), (0.2, 2.0), (0.3, 1.0)]) == pytest.approx(-1.0)

    def test_bounded(self):
        r = norm_correlation([(0.1, 0.5), (0.4, 0.1), (0.2, 0.9), (0.3, 0.3)])
        assert -1.0 <= r <= 1.0
        assert not math.isnan(r)

    def test_too_few_samples(self):
        with pytest.raises(EmptyInputError):
            norm_correlation([(0.1, 0.2)])

    def test_constant_coordinate(self):
        with pytest.raises(DegenerateVarianceError):
            norm_correlation([(0.1, 0.2), (0.1, 0.3)])
