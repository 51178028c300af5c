"""Tests for the benchmark circuit generators"""

import pytest

from hic.core.circuit import GateKind, Observable
from hic.core.generators import gen_ising_1d, gen_qaoa_mirrored, gen_random_clifford, ring_edges
from hic.core.simulator import exact_expectation
from hic.utils.exceptions import InvalidParameterError


@pytest.mark.unit
class TestIsing:

    def test_sequential_bonds(self):
        circuit = gen_ising_1d(4, 1)
        bonds = [g.qubits for g in circuit.gates if g.kind == GateKind.RZZ]
        assert bonds == [(0, 1), (1, 2), (2, 3)]
        assert circuit.name == 'ising_4q_1s'

    def test_brick_ordering_with_cx_interaction(self):
        circuit = gen_ising_1d(6, 1, interaction='cx', ordering='brick')
        cx_pairs = [g.qubits for g in circuit.gates if g.kind == GateKind.CX]
        assert cx_pairs[::2] == [(0, 1), (2, 3), (4, 5), (1, 2), (3, 4)]
        assert circuit.count_ops()['cx'] == 10
        assert circuit.count_ops()['rz'] == 5

    def test_invalid_arguments(self):
        with pytest.raises(InvalidParameterError):
            gen_ising_1d(1, 2)
        with pytest.raises(InvalidParameterError):
            gen_ising_1d(4, 0)
        with pytest.raises(InvalidParameterError):
            gen_ising_1d(4, 1, interaction='xx')


@pytest.mark.unit
class TestRandomClifford:

    def test_seed_determines_circuit(self):
        assert gen_random_clifford(6, 3, seed=11) == gen_random_clifford(6, 3, seed=11)
        assert gen_random_clifford(6, 3, seed=11) != gen_random_clifford(6, 3, seed=12)

    def test_only_clifford_gates(self):
        circuit = gen_random_clifford(8, 4, seed=3)
        allowed = {GateKind.H, GateKind.S, GateKind.SDG, GateKind.X, GateKind.Y, GateKind.Z, GateKind.CX}
        assert {g.kind for g in circuit.gates} <= allowed

    def test_density_zero_has_no_entanglers(self):
        circuit = gen_random_clifford(6, 3, seed=0, cx_density=0.0)
        assert not circuit.two_qubit_gates()


@pytest.mark.unit
class TestQaoaMirrored:

    def test_ideal_output_is_all_zero(self):
        circuit = gen_qaoa_mirrored(5, ring_edges(range(5)), gamma=0.9, beta=0.2, layers=2)
        assert exact_expectation(circuit, Observable.mean_z(5)) == pytest.approx(1.0, abs=1e-12)

    def test_mirror_doubles_the_forward_gates(self):
        circuit = gen_qaoa_mirrored(4, ring_edges(range(4)))
        assert circuit.count_ops() == {'h': 8, 'rzz': 8, 'rx': 8}

    def test_bad_edge(self):
        with pytest.raises(InvalidParameterError):
            gen_qaoa_mirrored(3, [(0, 3)])

    def test_layer_angles_must_match(self):
        with pytest.raises(InvalidParameterError):
            gen_qaoa_mirrored(3, ring_edges(range(3)), gamma=[0.1, 0.2], layers=3)


@pytest.mark.unit
def test_ring_edges():
    assert ring_edges([8, 9, 10]) == [(8, 9), (9, 10), (10, 8)]
    assert ring_edges([0, 1]) == [(0, 1)]
