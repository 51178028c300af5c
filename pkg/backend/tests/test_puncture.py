"""Tests for Z-score puncturing"""

import networkx as nx
import numpy as np
import pytest
from networkx.utils import UnionFind

from hic.core.hardware import NoiseLaw, gen_topology, load_calibration, parse_calibration
from hic.core.puncture import candidate_constraints, full_map_component, puncture, zscore_outliers
from hic.utils.exceptions import InvalidParameterError, NoComponentsError
from conftest import line_calibration


@pytest.mark.unit
class TestZscoreOutliers:

    def test_threshold_is_strict(self):
        values = {'a': 1.0, 'b': 1.0, 'c': 1.0, 'd': 10.0}
        # max population z-score of 4 samples is sqrt(3)
        assert zscore_outliers(values, 1.5) == {'d'}
        assert zscore_outliers(values, 2.0) == set()

    def test_constant_values_have_no_outliers(self):
        assert zscore_outliers({0: 0.02, 1: 0.02, 2: 0.02}, 0.1) == set()

    def test_empty(self):
        assert zscore_outliers({}, 1.0) == set()

    def test_threshold_must_be_positive(self):
        with pytest.raises(InvalidParameterError):
            zscore_outliers({0: 1.0}, 0.0)


@pytest.mark.unit
class TestPuncture:

    def test_outlier_qubit_splits_line(self, split_line_snapshot):
        punctured = puncture(split_line_snapshot, 2.0, 2.0)
        assert punctured.outlier_qubits == {4}
        assert punctured.removed_edges == {(3, 4), (4, 5)}
        assert [sorted(c.qubits) for c in punctured.components] == [[0, 1, 2, 3], [5, 6, 7, 8]]
        assert [c.id for c in punctured.components] == [0, 1]
        assert candidate_constraints(punctured) == [4]

    def test_outlier_edge_splits_line(self):
        snapshot = parse_calibration(line_calibration(5, overrides={(1, 2): 0.2}))
        punctured = puncture(snapshot, 1.5, 1.5)
        assert punctured.outlier_edges == {(1, 2)}
        assert not punctured.removed_qubits
        assert punctured.component_sizes == [2, 3]
        assert candidate_constraints(punctured) == [2, 3]

    def test_isolated_qubit_is_removed(self):
        snapshot = parse_calibration(line_calibration(3, overrides={(0, 1): 0.2}))
        punctured = puncture(snapshot, 5.0, 0.5)
        assert not punctured.outlier_qubits
        assert punctured.removed_qubits == {0}
        assert [sorted(c.qubits) for c in punctured.components] == [[1, 2]]

    def test_qaoa_fixture_islands(self, qaoa_snapshot):
        punctured = puncture(qaoa_snapshot, 2.0, 2.0)
        assert punctured.outlier_qubits == {8}
        assert [sorted(c.qubits) for c in punctured.components] == [list(range(8)), [9, 10, 11, 12]]
        assert candidate_constraints(punctured) == [4, 5, 6, 7, 8]

    def test_components_partition_retained_qubits(self, data_dir):
        snapshot = load_calibration(data_dir / 'falcon27_calibration.json')
        punctured = puncture(snapshot, 2.0, 2.0)
        covered = set().union(*(c.qubits for c in punctured.components))
        assert covered == punctured.retained_qubits
        assert punctured.retained_qubits.isdisjoint(punctured.removed_qubits)
        assert punctured.outlier_qubits == {6, 12, 14}
        assert punctured.outlier_edges == {(12, 13)}
        assert punctured.component_sizes == [11, 12]

    def test_no_components_left(self):
        snapshot = parse_calibration(line_calibration(2, overrides={1: 0.5}))
        punctured = puncture(snapshot, 0.5, 0.5)
        assert punctured.components == []
        with pytest.raises(NoComponentsError):
            candidate_constraints(punctured)

    def test_combined_metric(self):
        snapshot = parse_calibration(line_calibration(9, overrides={4: 0.3}))
        punctured = puncture(snapshot, 2.0, 2.0, qubit_metric='combined')
        assert punctured.outlier_qubits == {4}


@pytest.mark.unit
def test_full_map_component(line6_snapshot):
    component = full_map_component(line6_snapshot, 3)
    assert component.id == 3
    assert component.size == 6
    assert len(component.edges) == 5


TOPOLOGIES = [
    ('line', {'n': 12}),
    ('grid', {'rows': 3, 'cols': 4}),
    ('heavy_hex', {'cells': 1}),
    ('heavy_hex', {'cells': 2}),
]


def noisy_topology(kind, size, seed):
    return gen_topology(kind, seed, NoiseLaw(outlier_fraction=0.15), **size)


def reference_outliers(rates, z):
    keys = sorted(rates)
    values = np.array([rates[k] for k in keys])
    scores = (values - values.mean()) / values.std()
    return {k for k, score in zip(keys, scores) if score > z}


@pytest.mark.unit
class TestPunctureProperties:

    @pytest.mark.parametrize('kind, size', TOPOLOGIES)
    @pytest.mark.parametrize('seed', range(5))
    def test_raising_thresholds_never_removes_more(self, kind, size, seed):
        snapshot = noisy_topology(kind, size, seed)
        thresholds = [0.5, 1.0, 1.5, 2.0, 3.0]
        for low, high in zip(thresholds, thresholds[1:]):
            strict = puncture(snapshot, low, low).removed_qubits
            assert puncture(snapshot, high, low).removed_qubits <= strict
            assert puncture(snapshot, low, high).removed_qubits <= strict
            assert puncture(snapshot, high, high).removed_qubits <= strict

    @pytest.mark.parametrize('kind, size', TOPOLOGIES)
    @pytest.mark.parametrize('seed', range(5))
    def test_components_match_union_find(self, kind, size, seed):
        snapshot = noisy_topology(kind, size, seed)
        noise = snapshot.noise
        bad_qubits = reference_outliers(noise.readout_error, 1.5)
        bad_edges = reference_outliers(noise.cx_error, 1.5)
        edges = [
            e for e in sorted(snapshot.coupling.edges)
            if e not in bad_edges and not bad_qubits.intersection(e)
        ]
        forest = UnionFind()
        for a, b in edges:
            forest.union(a, b)
        expected = sorted((sorted(group) for group in forest.to_sets()), key=min)

        punctured = puncture(snapshot, 1.5, 1.5)
        assert punctured.outlier_qubits == bad_qubits
        assert punctured.outlier_edges == bad_edges
        assert [sorted(c.qubits) for c in punctured.components] == expected
        assert [c.id for c in punctured.components] == list(range(len(expected)))

    @pytest.mark.parametrize('kind, size', TOPOLOGIES)
    @pytest.mark.parametrize('seed', range(5))
    def test_no_dangling_edges_or_isolated_qubits(self, kind, size, seed):
        punctured = puncture(noisy_topology(kind, size, seed), 1.0, 1.0)
        for component in punctured.components:
            assert component.size >= 2
            assert all(a in component.qubits and b in component.qubits for a, b in component.edges)
            touched = {q for e in component.edges for q in e}
            assert touched == set(component.qubits)
        for a, b in punctured.retained_edges:
            assert a not in punctured.removed_qubits and b not in punctured.removed_qubits
        assert punctured.retained_edges.isdisjoint(punctured.removed_edges)
        sizes = punctured.component_sizes
        if sizes:
            assert candidate_constraints(punctured) == list(range(min(sizes), max(sizes) + 1))

    def test_barbell_bridge_outlier_leaves_two_cliques(self):
        graph = nx.barbell_graph(4, 0)
        bridge = (3, 4)
        calibration = {
            'schema': 1,
            'name': 'barbell8',
            'qubits': [{'id': q, 'readout_error': 0.01, 'sx_error': 3e-4} for q in sorted(graph.nodes)],
            'edges': [
                {'q0': a, 'q1': b, 'cx_error': 0.2 if (a, b) == bridge else 0.01}
                for a, b in sorted(tuple(sorted(e)) for e in graph.edges)
            ],
        }
        punctured = puncture(parse_calibration(calibration), 2.0, 2.0)
        assert punctured.outlier_edges == {bridge}
        assert not punctured.removed_qubits
        assert [sorted(c.qubits) for c in punctured.components] == [[0, 1, 2, 3], [4, 5, 6, 7]]
        assert [len(c.edges) for c in punctured.components] == [6, 6]
        assert candidate_constraints(punctured) == [4]
