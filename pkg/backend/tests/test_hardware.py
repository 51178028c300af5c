"""Tests for calibration loading and synthetic topologies"""

import json

import pytest

from hic.core.hardware import (
    NoiseLaw, calibration_document, edge_key, gen_topology, load_calibration, parse_calibration, save_calibration
)
from hic.utils.exceptions import (
    CalibrationSchemaError, DisconnectedMapError, ErrorCode, FileError, InvalidParameterError, RateOutOfRangeError
)
from conftest import line_calibration


@pytest.mark.unit
class TestLoadCalibration:

    def test_bundled_fixture(self, data_dir):
        snapshot = load_calibration(data_dir / 'falcon27_calibration.json')
        assert snapshot.coupling.num_physical_qubits == 27
        assert len(snapshot.coupling.edges) == 28
        assert snapshot.noise.readout_error[6] == pytest.approx(0.12)
        assert snapshot.noise.edge_error(13, 12) == pytest.approx(0.05)
        assert snapshot.name == 'falcon27'

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileError) as exc:
            load_calibration(tmp_path / 'absent.json')
        assert exc.value.error_code == ErrorCode.FILE_NOT_FOUND

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"schema": 1,')
        with pytest.raises(CalibrationSchemaError):
            load_calibration(path)

    def test_wrong_schema_version(self):
        data = line_calibration(3)
        data['schema'] = 2
        with pytest.raises(CalibrationSchemaError) as exc:
            parse_calibration(data)
        assert exc.value.field == 'schema'

    def test_unknown_field_names_its_location(self):
        data = line_calibration(3)
        data['qubits'][1]['t1'] = 80.0
        with pytest.raises(CalibrationSchemaError) as exc:
            parse_calibration(data)
        assert exc.value.field == 'qubits[1].t1'

    def test_rate_out_of_range(self):
        data = line_calibration(3)
        data['edges'][0]['cx_error'] = 1.5
        with pytest.raises(RateOutOfRangeError):
            parse_calibration(data)

    def test_ids_must_be_contiguous(self):
        data = line_calibration(3)
        data['qubits'][2]['id'] = 5
        with pytest.raises(CalibrationSchemaError) as exc:
            parse_calibration(data)
        assert exc.value.details['missing_ids'] == [2, 3, 4]

    def test_duplicate_edge(self):
        data = line_calibration(3)
        data['edges'].append({'q0': 1, 'q1': 0, 'cx_error': 0.02})
        with pytest.raises(CalibrationSchemaError):
            parse_calibration(data)

    def test_disconnected_map(self):
        data = line_calibration(4)
        del data['edges'][1]
        with pytest.raises(DisconnectedMapError):
            parse_calibration(data)

    def test_save_then_load(self, tmp_path, line6_snapshot):
        path = save_calibration(line6_snapshot, tmp_path / 'nested' / 'line6.json')
        assert json.loads(path.read_text())['schema'] == 1
        assert load_calibration(path) == line6_snapshot


@pytest.mark.unit
class TestNoiseProfile:

    def test_qubit_metrics(self, line6_snapshot):
        noise = line6_snapshot.noise
        assert noise.qubit_error(0) == pytest.approx(0.01)
        assert noise.qubit_error(0, 'sx') == pytest.approx(3e-4)
        assert noise.qubit_error(0, 'combined') == pytest.approx(1 - 0.99 * (1 - 3e-4))
        with pytest.raises(InvalidParameterError):
            noise.qubit_error(0, 't2')

    def test_scaled_clips_to_one(self, line6_snapshot):
        scaled = line6_snapshot.noise.scaled(200.0)
        assert scaled.readout_error[0] == 1.0
        assert scaled.sx_error[0] == pytest.approx(0.06)

    def test_edge_key_is_sorted(self):
        assert edge_key(5, 2) == (2, 5)


@pytest.mark.unit
class TestGenTopology:

    @pytest.mark.parametrize('kind, size, qubits, edges', [
        ('line', {'n': 7}, 7, 6),
        ('grid', {'rows': 3, 'cols': 4}, 12, 17),
        ('heavy_hex', {'cells': 2}, 27, 28),
    ])
    def test_shapes(self, kind, size, qubits, edges):
        snapshot = gen_topology(kind, seed=1, **size)
        assert snapshot.coupling.num_physical_qubits == qubits
        assert len(snapshot.coupling.edges) == edges
        assert snapshot.coupling.is_connected()

    def test_pure_function_of_seed(self):
        law = NoiseLaw(outlier_fraction=0.2)
        first = gen_topology('grid', seed=4, noise_law=law, rows=3, cols=3)
        second = gen_topology('grid', seed=4, noise_law=law, rows=3, cols=3)
        other = gen_topology('grid', seed=5, noise_law=law, rows=3, cols=3)
        assert calibration_document(first) == calibration_document(second)
        assert calibration_document(first) != calibration_document(other)

    def test_rates_are_valid_probabilities(self):
        snapshot = gen_topology('heavy_hex', seed=3, noise_law=NoiseLaw(outlier_fraction=0.5, outlier_multiplier=80))
        rates = list(snapshot.noise.readout_error.values()) + list(snapshot.noise.cx_error.values())
        assert all(0.0 <= r <= 1.0 for r in rates)

    def test_missing_size(self):
        with pytest.raises(InvalidParameterError):
            gen_topology('grid', seed=0, rows=3)

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameterError):
            gen_topology('torus', seed=0)

    def test_bad_noise_law(self):
        with pytest.raises(InvalidParameterError):
            NoiseLaw(outlier_fraction=1.0)
