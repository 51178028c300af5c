"""
Report service

Converts pipeline results into the pydantic report models and writes them as
JSON documents and CSV plot data. Reports contain no timestamps; wall-clock
timing goes to a separate ``timing.json``.
"""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from pydantic import BaseModel

from ..core.cut_finder import CutStrategy, overhead
from ..core.puncture import PuncturedMap, candidate_constraints
from ..models.report_models import (
    CandidateReport, ComparisonReport, ComponentReport, PlacementReport, PunctureReport,
    SelectionReport, StrategyReport, TimingReport
)
from ..utils.exceptions import ErrorCode, FileError
from ..utils.logging_utils import LoggingUtils
from .selector_service import CandidateEvaluation, ComparisonResult, SelectionResult

logger = LoggingUtils.get_logger(__name__)

CANDIDATE_COLUMNS = [
    'device_constraint', 'feasible', 'gate_cuts', 'wire_cuts', 'canonical_executions',
    'actual_subexperiments', 'weighted_score', 'norm2', 'objective', 'reason',
]
COMPARISON_COLUMNS = [
    'circuit', 'winner_d', 'winner_cuts', 'winner_executions', 'winner_weighted_score',
    'baseline_d', 'baseline_cuts', 'baseline_executions', 'baseline_weighted_score',
    'delta_cuts', 'execution_ratio', 'delta_weighted_score',
]
CORRELATION_COLUMNS = ['circuit', 'num_qubits', 'samples', 'pearson_r']


def _round(value: Optional[float], digits: int = 10) -> Optional[float]:
    return None if value is None else round(float(value), digits)


class ReportService:
    """Service for building and writing run reports"""

    def __init__(self, output_dir: Union[str, Path, None] = None):
        self.output_dir = Path(output_dir) if output_dir is not None else None

    @staticmethod
    def puncture_report(punctured: PuncturedMap, qubit_metric: str = 'readout') -> PunctureReport:
        constraints = candidate_constraints(punctured) if punctured.components else []
        return PunctureReport(
            z_v=punctured.z_v,
            z_e=punctured.z_e,
            qubit_metric=qubit_metric,
            outlier_qubits=sorted(punctured.outlier_qubits),
            outlier_edges=sorted(punctured.outlier_edges),
            removed_qubits=sorted(punctured.removed_qubits),
            removed_edges=sorted(punctured.removed_edges),
            retained_qubits=sorted(punctured.retained_qubits),
            components=[
                ComponentReport(id=c.id, qubits=sorted(c.qubits), edges=sorted(c.edges))
                for c in punctured.components
            ],
            candidate_constraints=constraints,
        )

    @staticmethod
    def strategy_report(strategy: CutStrategy) -> StrategyReport:
        report = overhead(strategy)
        return StrategyReport(
            device_constraint=strategy.device_constraint,
            gate_cuts=report.num_gate_cuts,
            wire_cuts=report.num_wire_cuts,
            actions=[a.to_dict() for a in strategy.actions],
            widths=strategy.widths,
            gamma=report.gamma,
            canonical_executions=report.canonical_executions,
            actual_subexperiments=report.actual_subexperiments,
        )

    @classmethod
    def candidate_report(cls, candidate: Optional[CandidateEvaluation]) -> Optional[CandidateReport]:
        if candidate is None:
            return None
        placements = [
            PlacementReport(
                subcircuit=i,
                width=p.width,
                component_id=p.layout.component_id,
                physical_qubits=[p.layout.mapping[q] for q in range(p.width)],
                score=_round(p.score),
                swaps=p.layout.swaps,
            )
            for i, p in enumerate(candidate.placements)
        ]
        return CandidateReport(
            device_constraint=candidate.device_constraint,
            feasible=candidate.feasible,
            reason=candidate.reason,
            strategy=cls.strategy_report(candidate.strategy) if candidate.strategy is not None else None,
            placements=placements,
            weighted_score=_round(candidate.weighted_score),
            norm2=_round(candidate.norm2),
            objective=_round(candidate.objective),
        )

    @classmethod
    def selection_report(cls, circuit_name: str, num_qubits: int, result: SelectionResult,
                         k_max: int, alpha: float = 1.0, qubit_metric: str = 'readout') -> SelectionReport:
        return SelectionReport(
            circuit=circuit_name,
            num_qubits=num_qubits,
            k_max=k_max,
            alpha=alpha,
            puncture=cls.puncture_report(result.punctured, qubit_metric),
            candidates=[cls.candidate_report(c) for c in result.all_candidates],
            winner=cls.candidate_report(result.winner),
        )

    @classmethod
    def comparison_report(cls, comparison: ComparisonResult) -> ComparisonReport:
        return ComparisonReport(
            winner=cls.candidate_report(comparison.selection.winner),
            baseline=cls.candidate_report(comparison.baseline),
            delta_cuts=comparison.delta_cuts,
            execution_ratio=_round(comparison.execution_ratio),
            delta_weighted_score=_round(comparison.delta_weighted_score),
        )

    @staticmethod
    def candidate_rows(report: SelectionReport) -> List[Dict[str, Any]]:
        rows = []
        for c in report.candidates:
            s = c.strategy
            rows.append({
                'device_constraint': c.device_constraint,
                'feasible': c.feasible,
                'gate_cuts': s.gate_cuts if s else None,
                'wire_cuts': s.wire_cuts if s else None,
                'canonical_executions': s.canonical_executions if s else None,
                'actual_subexperiments': s.actual_subexperiments if s else None,
                'weighted_score': c.weighted_score,
                'norm2': c.norm2,
                'objective': c.objective,
                'reason': c.reason,
            })
        return rows

    @staticmethod
    def comparison_row(circuit_name: str, report: ComparisonReport) -> Dict[str, Any]:
        def side(candidate: Optional[CandidateReport], prefix: str) -> Dict[str, Any]:
            strategy = candidate.strategy if candidate else None
            return {
                f'{prefix}_d': candidate.device_constraint if candidate else None,
                f'{prefix}_cuts': strategy.gate_cuts + strategy.wire_cuts if strategy else None,
                f'{prefix}_executions': strategy.canonical_executions if strategy else None,
                f'{prefix}_weighted_score': candidate.weighted_score if candidate else None,
            }

        return {
            'circuit': circuit_name,
            **side(report.winner, 'winner'),
            **side(report.baseline, 'baseline'),
            'delta_cuts': report.delta_cuts,
            'execution_ratio': report.execution_ratio,
            'delta_weighted_score': report.delta_weighted_score,
        }

    def _resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        if not path.is_absolute() and self.output_dir is not None:
            path = self.output_dir / path
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise FileError(
                f"Cannot create output directory {path.parent}: {e}",
                ErrorCode.FILE_NOT_FOUND,
                filename=str(path)
            ) from e
        return path

    def write_json(self, model: BaseModel, path: Union[str, Path]) -> Path:
        target = self._resolve(path)
        target.write_text(model.model_dump_json(indent=2) + '\n', encoding='utf-8')
        logger.info("Wrote report", extra={'path': str(target)})
        return target

    def write_csv(self, rows: Iterable[Dict[str, Any]], columns: Sequence[str], path: Union[str, Path]) -> Path:
        target = self._resolve(path)
        with target.open('w', newline='', encoding='utf-8') as handle:
            writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction='ignore')
            writer.writeheader()
            for row in rows:
                writer.writerow({k: '' if v is None else v for k, v in row.items()})
        logger.info("Wrote CSV", extra={'path': str(target), 'columns': len(columns)})
        return target

    def write_timing(self, timing: TimingReport, path: Union[str, Path] = 'timing.json') -> Path:
        return self.write_json(timing, path)
