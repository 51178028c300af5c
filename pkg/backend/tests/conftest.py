"""Shared fixtures for the test suite"""

import json
from pathlib import Path

import pytest

from hic.core.circuit import Circuit, Gate, GateKind
from hic.core.generators import gen_ising_1d
from hic.core.hardware import parse_calibration
from hic.utils.config_utils import HICConfig, PunctureConfig

DATA_DIR = Path(__file__).resolve().parents[1] / 'src' / 'hic' / 'data'


def line_calibration(num_qubits, readout=0.01, sx=3e-4, cx=0.01, overrides=None):
    """Calibration dictionary for a path of ``num_qubits`` qubits"""
    overrides = overrides or {}
    return {
        'schema': 1,
        'name': f'line{num_qubits}',
        'qubits': [
            {'id': q, 'readout_error': overrides.get(q, readout), 'sx_error': sx}
            for q in range(num_qubits)
        ],
        'edges': [
            {'q0': q, 'q1': q + 1, 'cx_error': overrides.get((q, q + 1), cx)}
            for q in range(num_qubits - 1)
        ],
    }


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def line6_snapshot():
    return parse_calibration(line_calibration(6))


@pytest.fixture
def split_line_snapshot():
    """9-qubit path whose middle qubit is a readout outlier"""
    return parse_calibration(line_calibration(9, overrides={4: 0.3}))


@pytest.fixture
def qaoa_snapshot():
    return parse_calibration(json.loads((DATA_DIR / 'qaoa12_snapshot.json').read_text()))


@pytest.fixture
def ising4():
    return gen_ising_1d(4, 2)


@pytest.fixture
def ising6():
    return gen_ising_1d(6, 2)


@pytest.fixture
def entangler():
    """Small circuit mixing every cuttable gate kind"""
    return Circuit(4, (
        Gate(GateKind.H, (0,)),
        Gate(GateKind.RX, (1,), (0.4,)),
        Gate(GateKind.CX, (0, 1)),
        Gate(GateKind.RX, (2,), (0.9,)),
        Gate(GateKind.CZ, (1, 2)),
        Gate(GateKind.H, (3,)),
        Gate(GateKind.RZZ, (2, 3), (0.7,)),
        Gate(GateKind.RX, (3,), (0.3,)),
        Gate(GateKind.T, (1,)),
        Gate(GateKind.H, (2,)),
    ), name='entangler')


@pytest.fixture
def config():
    return HICConfig(puncture=PunctureConfig(z_v=2.0, z_e=2.0))


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ('HIC_CONFIG', 'HIC_SEED', 'HIC_SHOTS', 'HIC_JOBS', 'HIC_LOG_LEVEL',
                 'HIC_LOG_FORMAT', 'HIC_LOG_FILE', 'HIC_OUTPUT_DIR'):
        monkeypatch.delenv(name, raising=False)
