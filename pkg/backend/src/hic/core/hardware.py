"""
Hardware model

Coupling maps, calibrated noise profiles, calibration file I/O and synthetic
topology generation with a log-normal noise law plus a Bernoulli outlier layer.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..models.calibration_model import (
    CalibrationDocument, QubitCalibration, EdgeCalibration, CALIBRATION_SCHEMA_VERSION
)
from ..utils.exceptions import (
    CalibrationSchemaError, RateOutOfRangeError, DisconnectedMapError,
    InvalidParameterError, FileError, ErrorCode
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)

Edge = Tuple[int, int]


def edge_key(a: int, b: int) -> Edge:
    """Canonical (sorted) form of an undirected edge"""
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CouplingMap:
    """Physical qubits and their two-qubit connections"""
    num_physical_qubits: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        normalized = set()
        for a, b in self.edges:
            if a == b:
                raise InvalidParameterError('edges', f"self-loop on qubit {a}", value=(a, b))
            if not (0 <= a < self.num_physical_qubits and 0 <= b < self.num_physical_qubits):
                raise InvalidParameterError('edges', f"edge ({a}, {b}) out of range", value=(a, b))
            normalized.add(edge_key(int(a), int(b)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @property
    def qubits(self) -> range:
        return range(self.num_physical_qubits)

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.qubits)
        graph.add_edges_from(sorted(self.edges))
        return graph

    def is_connected(self) -> bool:
        return self.num_physical_qubits == 1 or nx.is_connected(self.graph())


@dataclass(frozen=True)
class NoiseProfile:
    """Calibrated error rates for qubits and edges"""
    readout_error: Dict[int, float]
    sx_error: Dict[int, float]
    cx_error: Dict[Edge, float]

    def edge_error(self, a: int, b: int) -> float:
        return self.cx_error[edge_key(a, b)]

    def qubit_error(self, qubit: int, metric: str = 'readout') -> float:
        """Scalar qubit rate used for outlier detection

        Args:
            qubit: Physical qubit
            metric: 'readout', 'sx' or 'combined' (1 - product of fidelities)
        """
        if metric == 'readout':
            return self.readout_error[qubit]
        if metric == 'sx':
            return self.sx_error[qubit]
        if metric == 'combined':
            return 1.0 - (1.0 - self.readout_error[qubit]) * (1.0 - self.sx_error[qubit])
        raise InvalidParameterError('qubit_metric', "must be 'readout', 'sx' or 'combined'", value=metric)

    def scaled(self, factor: float) -> 'NoiseProfile':
        """Every rate multiplied by ``factor`` and clipped to [0, 1]"""
        if factor < 0:
            raise InvalidParameterError('factor', "must be non-negative", value=factor)

        def clip(value: float) -> float:
            return min(1.0, max(0.0, value * factor))

        return NoiseProfile(
            readout_error={q: clip(v) for q, v in self.readout_error.items()},
            sx_error={q: clip(v) for q, v in self.sx_error.items()},
            cx_error={e: clip(v) for e, v in self.cx_error.items()},
        )


@dataclass(frozen=True)
class CalibrationSnapshot:
    """Coupling map plus one consistent set of calibration data"""
    coupling: CouplingMap
    noise: NoiseProfile
    timestamp: str = "synthetic"
    name: str = "device"

    def __post_init__(self):
        for qubit in self.coupling.qubits:
            if qubit not in self.noise.readout_error or qubit not in self.noise.sx_error:
                raise CalibrationSchemaError(f"qubit {qubit} has no calibration entry", field=f"qubits[{qubit}]")
        for edge in self.coupling.edges:
            if edge not in self.noise.cx_error:
                raise CalibrationSchemaError(f"edge {edge} has no cx_error", field=f"edges{list(edge)}")
        for name, rates in (('readout_error', self.noise.readout_error),
                            ('sx_error', self.noise.sx_error),
                            ('cx_error', self.noise.cx_error)):
            for key, value in rates.items():
                if not (0.0 <= value <= 1.0) or math.isnan(value):
                    raise RateOutOfRangeError(f"{name}[{key}]", value)

    def with_noise(self, noise: NoiseProfile) -> 'CalibrationSnapshot':
        return CalibrationSnapshot(self.coupling, noise, self.timestamp, self.name)


def _format_location(loc: Tuple) -> str:
    text = ''
    for part in loc:
        if isinstance(part, int):
            text += f'[{part}]'
        else:
            text += f'.{part}' if text else str(part)
    return text


def snapshot_from_document(document: CalibrationDocument) -> CalibrationSnapshot:
    """Build and validate a snapshot from a parsed calibration document"""
    ids = [q.id for q in document.qubits]
    num_qubits = len(ids)
    if sorted(ids) != list(range(num_qubits)):
        missing = sorted(set(range(max(ids) + 1)) - set(ids))
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        raise CalibrationSchemaError(
            "qubit ids must be exactly 0..N-1",
            field='qubits',
            details={'missing_ids': missing, 'duplicate_ids': duplicates}
        )

    for index, qubit in enumerate(document.qubits):
        for name in ('readout_error', 'sx_error'):
            value = getattr(qubit, name)
            if not 0.0 <= value <= 1.0:
                raise RateOutOfRangeError(f"qubits[{index}].{name}", value)

    cx_error: Dict[Edge, float] = {}
    for index, edge in enumerate(document.edges):
        if edge.q0 == edge.q1:
            raise CalibrationSchemaError("self-loop edge", field=f"edges[{index}]")
        if edge.q0 >= num_qubits or edge.q1 >= num_qubits:
            raise CalibrationSchemaError("edge references an unknown qubit", field=f"edges[{index}]")
        key = edge_key(edge.q0, edge.q1)
        if key in cx_error:
            raise CalibrationSchemaError(f"duplicate edge {key}", field=f"edges[{index}]")
        if not 0.0 <= edge.cx_error <= 1.0:
            raise RateOutOfRangeError(f"edges[{index}].cx_error", edge.cx_error)
        cx_error[key] = edge.cx_error

    coupling = CouplingMap(num_qubits, frozenset(cx_error))
    if not coupling.is_connected():
        raise DisconnectedMapError(nx.number_connected_components(coupling.graph()))

    noise = NoiseProfile(
        readout_error={q.id: q.readout_error for q in document.qubits},
        sx_error={q.id: q.sx_error for q in document.qubits},
        cx_error=cx_error,
    )
    return CalibrationSnapshot(
        coupling, noise,
        timestamp=document.timestamp or "unknown",
        name=document.name or "device",
    )


def parse_calibration(data: Dict) -> CalibrationSnapshot:
    """Validate a calibration dictionary against the schema"""
    try:
        document = CalibrationDocument.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        location = _format_location(first['loc'])
        raise CalibrationSchemaError(
            f"invalid calibration field '{location}': {first['msg']}",
            field=location,
            details={'errors': [
                {'field': _format_location(err['loc']), 'message': err['msg']} for err in e.errors()
            ]}
        ) from e
    return snapshot_from_document(document)


def load_calibration(path: Union[str, Path]) -> CalibrationSnapshot:
    """Load a calibration JSON file

    Args:
        path: File path

    Returns:
        CalibrationSnapshot: Validated snapshot
    """
    path = Path(path)
    if not path.exists():
        raise FileError(f"Calibration file not found: {path}", ErrorCode.FILE_NOT_FOUND, filename=str(path))
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise CalibrationSchemaError(f"calibration file is not valid JSON: {e.msg}", field='<document>') from e

    snapshot = parse_calibration(data)
    logger.info(
        "Loaded calibration",
        extra={'path': str(path), 'num_qubits': snapshot.coupling.num_physical_qubits,
               'num_edges': len(snapshot.coupling.edges)}
    )
    return snapshot


def calibration_document(snapshot: CalibrationSnapshot) -> CalibrationDocument:
    noise = snapshot.noise
    return CalibrationDocument(
        schema=CALIBRATION_SCHEMA_VERSION,
        name=snapshot.name,
        timestamp=snapshot.timestamp,
        qubits=[
            QubitCalibration(id=q, readout_error=noise.readout_error[q], sx_error=noise.sx_error[q])
            for q in snapshot.coupling.qubits
        ],
        edges=[
            EdgeCalibration(q0=a, q1=b, cx_error=noise.cx_error[(a, b)])
            for a, b in sorted(snapshot.coupling.edges)
        ],
    )


def save_calibration(snapshot: CalibrationSnapshot, path: Union[str, Path]) -> Path:
    """Write a snapshot in the calibration JSON schema"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = calibration_document(snapshot)
    path.write_text(json.dumps(document.model_dump(by_alias=True), indent=2) + '\n', encoding='utf-8')
    return path


@dataclass(frozen=True)
class NoiseLaw:
    """Log-normal rates around the means with a Bernoulli outlier layer"""
    mean_readout: float = 0.02
    mean_sx: float = 3e-4
    mean_cx: float = 0.01
    spread: float = 0.25
    outlier_fraction: float = 0.0
    outlier_multiplier: float = 5.0

    def __post_init__(self):
        for name in ('mean_readout', 'mean_sx', 'mean_cx', 'outlier_multiplier'):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(name, "must be positive", value=getattr(self, name))
        if self.spread < 0:
            raise InvalidParameterError('spread', "must be non-negative", value=self.spread)
        if not 0.0 <= self.outlier_fraction < 1.0:
            raise InvalidParameterError('outlier_fraction', "must lie in [0, 1)", value=self.outlier_fraction)


def _line_edges(n: int) -> Tuple[int, List[Edge]]:
    if n < 1:
        raise InvalidParameterError('n', "must be positive", value=n)
    return n, [(q, q + 1) for q in range(n - 1)]


def _grid_edges(rows: int, cols: int) -> Tuple[int, List[Edge]]:
    if rows < 1 or cols < 1:
        raise InvalidParameterError('rows/cols', "must be positive", value=(rows, cols))
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return rows * cols, edges


def _heavy_hex_edges(cells: int) -> Tuple[int, List[Edge]]:
    """One row of ``cells`` heavy-hex unit cells (cells=2 gives 27 qubits, 28 edges)"""
    if cells < 1:
        raise InvalidParameterError('cells', "must be positive", value=cells)
    width = 4 * cells
    coordinate_edges = []
    # two horizontal chains with subdivided bonds
    for y in (0, 2):
        coordinate_edges.extend(((x, y), (x + 1, y)) for x in range(width))
    # vertical links at every even brick column, subdivided
    for x in range(0, width + 1, 4):
        coordinate_edges.append(((x, 0), (x, 1)))
        coordinate_edges.append(((x, 1), (x, 2)))
    # pendant qubits towards the neighbouring rows
    for x in range(2, width, 4):
        coordinate_edges.append(((x, -1), (x, 0)))
        coordinate_edges.append(((x, 2), (x, 3)))
    coordinate_edges.append(((-1, 0), (0, 0)))
    coordinate_edges.append(((width, 2), (width + 1, 2)))

    nodes = sorted({p for e in coordinate_edges for p in e}, key=lambda p: (p[1], p[0]))
    labels = {p: i for i, p in enumerate(nodes)}
    return len(nodes), [edge_key(labels[a], labels[b]) for a, b in coordinate_edges]


def gen_topology(kind: str, seed: int, noise_law: Optional[NoiseLaw] = None,
                 name: Optional[str] = None, **size: int) -> CalibrationSnapshot:
    """Synthetic calibration snapshot

    Args:
        kind: 'line' (n), 'grid' (rows, cols) or 'heavy_hex' (cells)
        seed: Random seed; the snapshot is a pure function of its arguments
        noise_law: Rate distribution
        name: Snapshot name
        **size: Size parameters for the chosen kind

    Returns:
        CalibrationSnapshot: Generated snapshot
    """
    noise_law = noise_law or NoiseLaw()
    try:
        if kind == 'line':
            num_qubits, edges = _line_edges(int(size['n']))
        elif kind == 'grid':
            num_qubits, edges = _grid_edges(int(size['rows']), int(size['cols']))
        elif kind == 'heavy_hex':
            num_qubits, edges = _heavy_hex_edges(int(size.get('cells', 2)))
        else:
            raise InvalidParameterError('kind', "must be 'line', 'grid' or 'heavy_hex'", value=kind)
    except KeyError as e:
        raise InvalidParameterError(str(e.args[0]), f"required for topology '{kind}'") from e

    edges = sorted(set(edges))
    rng = np.random.default_rng(seed)
    law = noise_law

    def draw(mean: float, count: int) -> np.ndarray:
        return mean * np.exp(law.spread * rng.standard_normal(count) - law.spread ** 2 / 2)

    readout = draw(law.mean_readout, num_qubits)
    sx = draw(law.mean_sx, num_qubits)
    cx = draw(law.mean_cx, len(edges))
    qubit_outliers = rng.random(num_qubits) < law.outlier_fraction
    edge_outliers = rng.random(len(edges)) < law.outlier_fraction
    readout[qubit_outliers] *= law.outlier_multiplier
    sx[qubit_outliers] *= law.outlier_multiplier
    cx[edge_outliers] *= law.outlier_multiplier

    noise = NoiseProfile(
        readout_error={q: float(np.clip(readout[q], 0.0, 1.0)) for q in range(num_qubits)},
        sx_error={q: float(np.clip(sx[q], 0.0, 1.0)) for q in range(num_qubits)},
        cx_error={e: float(np.clip(cx[i], 0.0, 1.0)) for i, e in enumerate(edges)},
    )
    coupling = CouplingMap(num_qubits, frozenset(edges))
    logger.debug(
        "Generated topology",
        extra={'kind': kind, 'num_qubits': num_qubits, 'num_edges': len(edges),
               'outlier_qubits': int(qubit_outliers.sum()), 'outlier_edges': int(edge_outliers.sum())}
    )
    return CalibrationSnapshot(coupling, noise, timestamp=f"seed-{seed}", name=name or f"{kind}-{num_qubits}q")
