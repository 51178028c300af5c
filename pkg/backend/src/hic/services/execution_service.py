"""
Subexperiment execution service

Runs every variant circuit of a subexperiment set on the exact statevector
backend or on the noisy trajectory backend and feeds the estimates to
reconstruction. Noisy variants are routed with the initial mapping of their
subcircuit's selected layout.
"""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.circuit import Observable
from ..core.cut_finder import CutStrategy
from ..core.layout import ScoredPlacement, route
from ..core.hardware import NoiseProfile
from ..core.puncture import Component
from ..core.qpd import (
    ReconstructionResult, SubexperimentSet, VariantResult, generate_subexperiments, reconstruct
)
from ..core.simulator import NoisyExecConfig, exact_variant_values, noisy_variant_values
from ..utils.config_utils import SimulationConfig
from ..utils.exceptions import ValidationError
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)


def _variant_seed(seed: int, subcircuit: int, variant: int) -> int:
    return int(np.random.SeedSequence([seed, subcircuit, variant]).generate_state(1)[0])


class ExecutionService:
    """Service for executing and recombining subexperiments"""

    def __init__(self, config: Optional[SimulationConfig] = None, jobs: int = 1):
        self.config = config or SimulationConfig()
        self.jobs = jobs

    @LoggingUtils.log_performance(threshold_seconds=1.0)
    def execute_subexperiments(self, subexperiments: SubexperimentSet,
                               placements: Optional[Sequence[ScoredPlacement]] = None,
                               noise: Optional[NoiseProfile] = None) -> Dict[Tuple[int, int], VariantResult]:
        """Estimate every variant on the configured backend

        Args:
            subexperiments: Variants and masks to evaluate
            placements: Selected layout per subcircuit (noisy backend)
            noise: Calibrated rates (noisy backend)

        Returns:
            dict: VariantResult per (subcircuit index, variant index)
        """
        backend = self.config.backend
        if backend == 'noisy' and (placements is None or noise is None):
            raise ValidationError("the noisy backend needs placements and a noise profile", field='backend')

        results: Dict[Tuple[int, int], VariantResult] = {}
        for s, v, circuit, masks in subexperiments.iter_experiments():
            strings = subexperiments.pauli_strings[s]
            if backend == 'exact':
                values = exact_variant_values(circuit, strings, masks, max_qubits=self.config.max_qubits)
                results[(s, v)] = VariantResult(values=values)
                continue

            layout = placements[s].layout
            component = Component(layout.component_id, layout.physical_qubits, layout.allowed_edges)
            routed = route(circuit, layout.mapping, component, noise)
            cfg = NoisyExecConfig(
                shots=self.config.shots,
                seed=_variant_seed(self.config.seed, s, v),
                readout_flips=self.config.readout_flips,
                jobs=self.jobs,
            )
            values, errors = noisy_variant_values(
                routed.routed, routed, noise, cfg, strings, masks, max_qubits=self.config.max_qubits
            )
            results[(s, v)] = VariantResult(values=values, std_errors=errors, shots=cfg.shots)

        logger.info(
            "Executed subexperiments",
            extra={'backend': backend, 'subexperiments': len(results),
                   'shots': self.config.shots if backend == 'noisy' else 0}
        )
        return results

    def run_strategy(self, strategy: CutStrategy, observable: Optional[Observable] = None,
                     placements: Optional[Sequence[ScoredPlacement]] = None,
                     noise: Optional[NoiseProfile] = None) -> Tuple[ReconstructionResult, int]:
        """Generate, execute and reconstruct one strategy

        Returns:
            (reconstruction, number of executed subexperiments)
        """
        subexperiments = generate_subexperiments(strategy, observable)
        results = self.execute_subexperiments(subexperiments, placements, noise)
        return reconstruct(subexperiments, results), subexperiments.num_subexperiments


def execute_subexperiments(subexperiments: SubexperimentSet, config: Optional[SimulationConfig] = None,
                           placements: Optional[Sequence[ScoredPlacement]] = None,
                           noise: Optional[NoiseProfile] = None,
                           jobs: int = 1) -> Dict[Tuple[int, int], VariantResult]:
    return ExecutionService(config, jobs).execute_subexperiments(subexperiments, placements, noise)
