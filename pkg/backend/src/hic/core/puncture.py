"""
Coupling-map puncturing

Removes Z-score outlier qubits and edges from a calibrated coupling map,
cleans up dangling edges and isolated qubits, and extracts the remaining
low-noise islands as connected components.
"""

from dataclasses import dataclass
from typing import FrozenSet, Hashable, List, Mapping, Optional, Set, TypeVar

import networkx as nx
import numpy as np

from .hardware import CalibrationSnapshot, Edge
from ..utils.exceptions import InvalidParameterError, NoComponentsError
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)

K = TypeVar('K', bound=Hashable)


@dataclass(frozen=True)
class Component:
    """Connected island of the punctured map"""
    id: int
    qubits: FrozenSet[int]
    edges: FrozenSet[Edge]

    @property
    def size(self) -> int:
        return len(self.qubits)

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(sorted(self.qubits))
        graph.add_edges_from(sorted(self.edges))
        return graph


@dataclass(frozen=True)
class PuncturedMap:
    """Result of puncturing a snapshot"""
    retained_qubits: FrozenSet[int]
    retained_edges: FrozenSet[Edge]
    removed_qubits: FrozenSet[int]
    removed_edges: FrozenSet[Edge]
    components: List[Component]
    outlier_qubits: FrozenSet[int] = frozenset()
    outlier_edges: FrozenSet[Edge] = frozenset()
    z_v: Optional[float] = None
    z_e: Optional[float] = None

    @property
    def component_sizes(self) -> List[int]:
        return [c.size for c in self.components]


def zscore_outliers(values: Mapping[K, float], z: float) -> Set[K]:
    """Keys whose Z-score strictly exceeds ``z``

    Uses the population standard deviation. A (numerically) zero spread
    yields no outliers.

    Args:
        values: Rate per key
        z: Threshold

    Returns:
        set: Outlier keys
    """
    if z <= 0:
        raise InvalidParameterError('z', "threshold must be positive", value=z)
    if not values:
        return set()

    keys = list(values)
    rates = np.array([values[k] for k in keys], dtype=float)
    mu = float(rates.mean())
    sigma = float(rates.std())
    if sigma <= 1e-12 * max(1.0, abs(mu)):
        return set()

    scores = (rates - mu) / sigma
    return {k for k, score in zip(keys, scores) if score > z}


def puncture(snapshot: CalibrationSnapshot, z_v: float, z_e: float,
             qubit_metric: str = 'readout') -> PuncturedMap:
    """Construct the punctured coupling map

    Args:
        snapshot: Calibration snapshot
        z_v: Qubit Z-score threshold
        z_e: Edge Z-score threshold
        qubit_metric: Qubit rate used for outlier detection

    Returns:
        PuncturedMap: Retained/removed sets and connected components
    """
    coupling = snapshot.coupling
    noise = snapshot.noise
    all_qubits = frozenset(coupling.qubits)
    all_edges = frozenset(coupling.edges)

    qubit_rates = {q: noise.qubit_error(q, qubit_metric) for q in sorted(all_qubits)}
    edge_rates = {e: noise.cx_error[e] for e in sorted(all_edges)}
    outlier_qubits = frozenset(zscore_outliers(qubit_rates, z_v))
    outlier_edges = frozenset(zscore_outliers(edge_rates, z_e))

    removed_qubits = set(outlier_qubits)
    # dangling edges touch a removed qubit
    retained_edges = {
        e for e in all_edges
        if e not in outlier_edges and e[0] not in removed_qubits and e[1] not in removed_qubits
    }

    if len(all_qubits) > 1:
        touched = {q for e in retained_edges for q in e}
        removed_qubits |= {q for q in all_qubits if q not in touched}

    retained_qubits = all_qubits - removed_qubits

    graph = nx.Graph()
    graph.add_nodes_from(sorted(retained_qubits))
    graph.add_edges_from(sorted(retained_edges))
    groups = sorted((frozenset(c) for c in nx.connected_components(graph)), key=min)
    components = [
        Component(
            id=index,
            qubits=group,
            edges=frozenset(e for e in retained_edges if e[0] in group),
        )
        for index, group in enumerate(groups)
    ]

    logger.info(
        "Punctured coupling map",
        extra={'z_v': z_v, 'z_e': z_e, 'outlier_qubits': len(outlier_qubits),
               'outlier_edges': len(outlier_edges), 'removed_qubits': len(removed_qubits),
               'components': [c.size for c in components]}
    )
    return PuncturedMap(
        retained_qubits=frozenset(retained_qubits),
        retained_edges=frozenset(retained_edges),
        removed_qubits=frozenset(removed_qubits),
        removed_edges=all_edges - frozenset(retained_edges),
        components=components,
        outlier_qubits=outlier_qubits,
        outlier_edges=outlier_edges,
        z_v=z_v,
        z_e=z_e,
    )


def full_map_component(snapshot: CalibrationSnapshot, component_id: int) -> Component:
    """The unpunctured device as a single component"""
    return Component(
        id=component_id,
        qubits=frozenset(snapshot.coupling.qubits),
        edges=frozenset(snapshot.coupling.edges),
    )


def candidate_constraints(punctured: PuncturedMap) -> List[int]:
    """Every integer device constraint from the smallest to the largest island

    Args:
        punctured: Punctured map

    Returns:
        list: Ascending device constraints
    """
    if not punctured.components:
        raise NoComponentsError(details={'z_v': punctured.z_v, 'z_e': punctured.z_e})
    sizes = punctured.component_sizes
    return list(range(min(sizes), max(sizes) + 1))
