"""
Benchmark circuit generators

Trotterized 1D Ising evolution, seeded random Clifford layers and mirrored
QAOA circuits (forward circuit followed by its inverse).
"""

from typing import List, Sequence, Tuple, Union

import numpy as np

from .circuit import Circuit, Gate, GateKind
from ..utils.exceptions import InvalidParameterError

# single-qubit Clifford words drawn by the random generator
_CLIFFORD_WORDS: Tuple[Tuple[GateKind, ...], ...] = (
    (),
    (GateKind.H,),
    (GateKind.S,),
    (GateKind.SDG,),
    (GateKind.X,),
    (GateKind.Y,),
    (GateKind.Z,),
    (GateKind.H, GateKind.S),
    (GateKind.S, GateKind.H),
    (GateKind.H, GateKind.SDG),
    (GateKind.SDG, GateKind.H),
    (GateKind.H, GateKind.S, GateKind.H),
)


def _check_width(n: int) -> None:
    if n < 2:
        raise InvalidParameterError('n', "at least 2 qubits are required", value=n)


def _zz_interaction(a: int, b: int, theta: float, interaction: str) -> List[Gate]:
    if interaction == 'rzz':
        return [Gate(GateKind.RZZ, (a, b), (theta,))]
    return [
        Gate(GateKind.CX, (a, b)),
        Gate(GateKind.RZ, (b,), (theta,)),
        Gate(GateKind.CX, (a, b)),
    ]


def gen_ising_1d(n: int, steps: int, theta_zz: float = 0.5, theta_x: float = 0.3,
                 interaction: str = 'rzz', ordering: str = 'sequential') -> Circuit:
    """Trotterized transverse-field Ising chain

    Each step applies a ZZ interaction on every nearest-neighbour bond and then
    RX(theta_x) on every qubit.

    Args:
        n: Number of qubits
        steps: Number of Trotter steps
        theta_zz: Interaction angle
        theta_x: Transverse-field angle
        interaction: 'rzz' keeps RZZ gates, 'cx' lowers each to CX RZ CX
        ordering: 'sequential' bonds (0,1),(1,2),...; 'brick' even bonds then odd bonds

    Returns:
        Circuit: Ising circuit
    """
    _check_width(n)
    if steps < 1:
        raise InvalidParameterError('steps', "at least one Trotter step is required", value=steps)
    if interaction not in ('rzz', 'cx'):
        raise InvalidParameterError('interaction', "must be 'rzz' or 'cx'", value=interaction)
    if ordering not in ('sequential', 'brick'):
        raise InvalidParameterError('ordering', "must be 'sequential' or 'brick'", value=ordering)

    bonds = [(q, q + 1) for q in range(n - 1)]
    if ordering == 'brick':
        bonds = bonds[0::2] + bonds[1::2]

    gates: List[Gate] = []
    for _ in range(steps):
        for a, b in bonds:
            gates.extend(_zz_interaction(a, b, theta_zz, interaction))
        gates.extend(Gate(GateKind.RX, (q,), (theta_x,)) for q in range(n))

    return Circuit(n, tuple(gates), name=f"ising_{n}q_{steps}s")


def gen_random_clifford(n: int, depth: int, seed: int, cx_density: float = 1.0) -> Circuit:
    """Random Clifford circuit

    Every layer draws a single-qubit Clifford word per qubit and a random
    matching of CX gates; each matched pair is kept with probability
    ``cx_density``. The seed fully determines the circuit.

    Args:
        n: Number of qubits
        depth: Number of layers
        seed: Random seed
        cx_density: Probability of keeping each matched CX

    Returns:
        Circuit: Random Clifford circuit
    """
    _check_width(n)
    if depth < 1:
        raise InvalidParameterError('depth', "at least one layer is required", value=depth)
    if not 0.0 <= cx_density <= 1.0:
        raise InvalidParameterError('cx_density', "must lie in [0, 1]", value=cx_density)

    rng = np.random.default_rng(seed)
    gates: List[Gate] = []
    for _ in range(depth):
        for q in range(n):
            word = _CLIFFORD_WORDS[int(rng.integers(len(_CLIFFORD_WORDS)))]
            gates.extend(Gate(kind, (q,)) for kind in word)
        order = rng.permutation(n)
        for k in range(0, n - 1, 2):
            a, b = int(order[k]), int(order[k + 1])
            keep = rng.random() < cx_density
            flip = rng.random() < 0.5
            if keep:
                gates.append(Gate(GateKind.CX, (b, a) if flip else (a, b)))

    return Circuit(n, tuple(gates), name=f"clifford_{n}q_d{depth}_s{seed}")


def _per_layer(value: Union[float, Sequence[float]], layers: int, name: str) -> List[float]:
    if isinstance(value, (int, float)):
        return [float(value)] * layers
    values = [float(v) for v in value]
    if len(values) != layers:
        raise InvalidParameterError(name, f"expected {layers} angles", value=values)
    return values


def gen_qaoa_mirrored(n: int, edges: Sequence[Tuple[int, int]],
                      gamma: Union[float, Sequence[float]] = 0.7,
                      beta: Union[float, Sequence[float]] = 0.4,
                      layers: int = 1) -> Circuit:
    """QAOA MaxCut circuit followed by its inverse

    The ideal output is |0...0>, so every Z expectation is exactly 1.

    Args:
        n: Number of qubits
        edges: Problem graph edges
        gamma: Cost angle (or one per layer)
        beta: Mixer angle (or one per layer)
        layers: Number of QAOA layers

    Returns:
        Circuit: Mirrored QAOA circuit
    """
    _check_width(n)
    if layers < 1:
        raise InvalidParameterError('layers', "at least one layer is required", value=layers)
    for a, b in edges:
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise InvalidParameterError('edges', f"invalid edge ({a}, {b}) for {n} qubits", value=(a, b))

    gammas = _per_layer(gamma, layers, 'gamma')
    betas = _per_layer(beta, layers, 'beta')

    gates: List[Gate] = [Gate(GateKind.H, (q,)) for q in range(n)]
    for layer in range(layers):
        gates.extend(Gate(GateKind.RZZ, (int(a), int(b)), (gammas[layer],)) for a, b in edges)
        gates.extend(Gate(GateKind.RX, (q,), (betas[layer],)) for q in range(n))

    forward = Circuit(n, tuple(gates), name=f"qaoa_{n}q_p{layers}")
    return forward.compose(forward.inverse(), name=f"qaoa_mirrored_{n}q_p{layers}")


def ring_edges(qubits: Sequence[int]) -> List[Tuple[int, int]]:
    """Edges of a ring over the given qubits"""
    qubits = list(qubits)
    if len(qubits) < 3:
        return [(qubits[0], qubits[1])] if len(qubits) == 2 else []
    return [(qubits[i], qubits[(i + 1) % len(qubits)]) for i in range(len(qubits))]
