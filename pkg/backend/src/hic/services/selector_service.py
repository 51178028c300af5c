"""
Cut strategy selection service

Punctures the calibrated coupling map, sweeps every device constraint between
the smallest and the largest island, evaluates each candidate strategy in
parallel (cut search, placement on the best component, weighted layout
score) and reduces them deterministically to the winner. The equal-partition
constraint is evaluated the same way as the comparison baseline.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from ..core.circuit import Circuit
from ..core.cut_finder import CutStrategy, OverheadReport, equal_partition_constraint, find_cuts, overhead
from ..core.hardware import CalibrationSnapshot, NoiseProfile
from ..core.layout import ObjectiveInputs, ScoredPlacement, full_objective, objective_terms, place_and_route
from ..core.puncture import Component, PuncturedMap, candidate_constraints, full_map_component, puncture
from ..utils.config_utils import HICConfig
from ..utils.exceptions import ConfigurationError, InvalidParameterError
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)


@dataclass(frozen=True)
class CandidateEvaluation:
    """One device constraint, its strategy and placements"""
    device_constraint: int
    strategy: Optional[CutStrategy] = None
    placements: Tuple[ScoredPlacement, ...] = ()
    weighted_score: Optional[float] = None
    norm2: Optional[float] = None
    objective: Optional[float] = None
    overhead: Optional[OverheadReport] = None
    feasible: bool = False
    reason: Optional[str] = None

    @property
    def rank(self) -> Tuple[float, int, int]:
        return (self.objective, self.strategy.canonical_executions, self.device_constraint)


@dataclass(frozen=True)
class SelectionResult:
    """All candidates of a sweep and the winner (None when nothing is feasible)"""
    punctured: PuncturedMap
    winner: Optional[CandidateEvaluation]
    all_candidates: Tuple[CandidateEvaluation, ...] = ()
    baseline: Optional[CandidateEvaluation] = None


@dataclass(frozen=True)
class ComparisonResult:
    """HIC winner against the equal-partition baseline"""
    selection: SelectionResult
    baseline: Optional[CandidateEvaluation]
    delta_cuts: Optional[int] = None
    execution_ratio: Optional[float] = None
    delta_weighted_score: Optional[float] = None
    notes: List[str] = field(default_factory=list)


def best_placement(strategy: CutStrategy, components: Sequence[Component],
                   noise: NoiseProfile) -> Tuple[Optional[ScoredPlacement], ...]:
    """Lowest-score placement of every subcircuit (ties go to the lowest component id)"""
    ordered = sorted(components, key=lambda c: c.id)
    placements = []
    for sub in strategy.subcircuits:
        best: Optional[ScoredPlacement] = None
        for component in ordered:
            placement = place_and_route(sub, component, noise)
            if placement is not None and (best is None or placement.score < best.score):
                best = placement
        placements.append(best)
    return tuple(placements)


def evaluate_candidate(circuit: Circuit, device_constraint: int, components: Sequence[Component],
                       noise: NoiseProfile, k_max: Optional[int], max_expansions: int = 100_000,
                       alpha: float = 1.0) -> CandidateEvaluation:
    """Cut, place and score one device constraint

    Args:
        circuit: Circuit to cut
        device_constraint: Maximum subcircuit width
        components: Components the subcircuits may be placed on
        noise: Calibrated rates
        k_max: Cut budget (None for unbounded)
        max_expansions: Cut search limit
        alpha: Objective weight of the weighted layout score

    Returns:
        CandidateEvaluation: Feasible or annotated infeasible candidate
    """
    context_logger = LoggingUtils.create_context_logger(logger, {'device_constraint': device_constraint})
    strategy = find_cuts(circuit, device_constraint, k_max=k_max, max_expansions=max_expansions)
    if strategy is None:
        context_logger.debug("No strategy within the cut budget")
        return CandidateEvaluation(device_constraint, reason="no strategy within the cut budget")

    report = overhead(strategy)
    placements = best_placement(strategy, components, noise)
    if any(p is None for p in placements):
        unplaced = [i for i, p in enumerate(placements) if p is None]
        context_logger.debug("Unplaceable subcircuits", extra={'subcircuits': unplaced})
        return CandidateEvaluation(
            device_constraint, strategy=strategy, overhead=report,
            reason=f"subcircuits {unplaced} fit no component"
        )

    inputs = ObjectiveInputs(placements=placements, n=sum(strategy.widths), alpha=alpha)
    norm1, norm2 = objective_terms(inputs)
    objective = full_objective(inputs)
    context_logger.info(
        "Evaluated candidate",
        extra={'gate_cuts': strategy.num_gate_cuts, 'wire_cuts': strategy.num_wire_cuts,
               'weighted_score': round(norm1, 6), 'executions': strategy.canonical_executions}
    )
    return CandidateEvaluation(
        device_constraint=device_constraint,
        strategy=strategy,
        placements=placements,
        weighted_score=norm1,
        norm2=norm2,
        objective=objective,
        overhead=report,
        feasible=True,
    )


def pick_winner(candidates: Sequence[CandidateEvaluation]) -> Optional[CandidateEvaluation]:
    """Minimum objective, then fewer executions, then smaller constraint"""
    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        return None
    return min(feasible, key=lambda c: c.rank)


class SelectorService:
    """Service for hardware-informed cut strategy selection"""

    def __init__(self, config: Optional[HICConfig] = None):
        self.config = config or HICConfig()

    def _thresholds(self, z_v: Optional[float], z_e: Optional[float]) -> Tuple[float, float]:
        z_v = z_v if z_v is not None else self.config.puncture.z_v
        z_e = z_e if z_e is not None else self.config.puncture.z_e
        if z_v is None:
            raise ConfigurationError('puncture.z_v', "a qubit Z-score threshold is required")
        if z_e is None:
            raise ConfigurationError('puncture.z_e', "an edge Z-score threshold is required")
        return z_v, z_e

    def puncture(self, snapshot: CalibrationSnapshot, z_v: Optional[float] = None,
                 z_e: Optional[float] = None) -> PuncturedMap:
        z_v, z_e = self._thresholds(z_v, z_e)
        return puncture(snapshot, z_v, z_e, qubit_metric=self.config.puncture.qubit_metric)

    @LoggingUtils.log_performance(threshold_seconds=1.0)
    def select(self, circuit: Circuit, snapshot: CalibrationSnapshot, z_v: Optional[float] = None,
               z_e: Optional[float] = None, k_max: Optional[int] = None) -> SelectionResult:
        """Sweep device constraints and select the best-scoring strategy

        Args:
            circuit: Circuit to cut
            snapshot: Calibration snapshot
            z_v: Qubit Z-score threshold (config default when None)
            z_e: Edge Z-score threshold (config default when None)
            k_max: Cut budget (config default when None)

        Returns:
            SelectionResult: Every candidate plus the winner
        """
        k_max = k_max if k_max is not None else self.config.selection.k_max
        if k_max < 1:
            raise InvalidParameterError('k_max', "must be at least 1", value=k_max)
        punctured = self.puncture(snapshot, z_v, z_e)
        constraints = candidate_constraints(punctured)

        search = self.config.search
        selection = self.config.selection
        candidates = Parallel(n_jobs=selection.jobs)(
            delayed(evaluate_candidate)(
                circuit, d, punctured.components, snapshot.noise, k_max,
                search.max_expansions, selection.alpha
            )
            for d in constraints
        )
        winner = pick_winner(candidates)
        logger.info(
            "Selected cut strategy" if winner else "No feasible cut strategy",
            extra={'circuit': circuit.name, 'constraints': [constraints[0], constraints[-1]],
                   'feasible': sum(c.feasible for c in candidates),
                   'winner_d': winner.device_constraint if winner else None}
        )
        return SelectionResult(punctured=punctured, winner=winner, all_candidates=tuple(candidates))

    def baseline(self, circuit: Circuit, snapshot: CalibrationSnapshot,
                 punctured: PuncturedMap) -> CandidateEvaluation:
        """Equal partitioning with an unbounded budget, placed on islands or the full map"""
        components = list(punctured.components) + [full_map_component(snapshot, len(punctured.components))]
        return evaluate_candidate(
            circuit, equal_partition_constraint(circuit), components, snapshot.noise, None,
            self.config.search.max_expansions, self.config.selection.alpha
        )

    def compare_with_baseline(self, circuit: Circuit, snapshot: CalibrationSnapshot,
                              z_v: Optional[float] = None, z_e: Optional[float] = None,
                              k_max: Optional[int] = None) -> ComparisonResult:
        """Selection plus the equal-partition baseline and the reduction figures

        Args:
            circuit: Circuit to cut
            snapshot: Calibration snapshot
            z_v: Qubit Z-score threshold
            z_e: Edge Z-score threshold
            k_max: Cut budget

        Returns:
            ComparisonResult: Winner, baseline and their differences
        """
        selection = self.select(circuit, snapshot, z_v, z_e, k_max)
        base = self.baseline(circuit, snapshot, selection.punctured)
        selection = SelectionResult(
            punctured=selection.punctured,
            winner=selection.winner,
            all_candidates=selection.all_candidates,
            baseline=base,
        )
        return compare(selection, base)


def compare(selection: SelectionResult, base: Optional[CandidateEvaluation]) -> ComparisonResult:
    """Difference figures between a selection winner and a baseline candidate"""
    winner = selection.winner
    if winner is None or base is None or base.strategy is None:
        notes = ["no winner"] if winner is None else ["baseline has no strategy"]
        return ComparisonResult(selection=selection, baseline=base, notes=notes)

    delta_ws = None
    if base.weighted_score is not None:
        delta_ws = base.weighted_score - winner.weighted_score
    return ComparisonResult(
        selection=selection,
        baseline=base,
        delta_cuts=base.strategy.num_cuts - winner.strategy.num_cuts,
        execution_ratio=base.strategy.canonical_executions / winner.strategy.canonical_executions,
        delta_weighted_score=delta_ws,
    )


def select(circuit: Circuit, snapshot: CalibrationSnapshot, z_v: float, z_e: float, k_max: int,
           config: Optional[HICConfig] = None) -> SelectionResult:
    return SelectorService(config).select(circuit, snapshot, z_v, z_e, k_max)


def compare_with_baseline(circuit: Circuit, snapshot: CalibrationSnapshot, z_v: float, z_e: float,
                          k_max: int, config: Optional[HICConfig] = None) -> ComparisonResult:
    return SelectorService(config).compare_with_baseline(circuit, snapshot, z_v, z_e, k_max)
