"""
Experiment service

End-to-end pipeline runs (selection, baseline comparison, optional
subexperiment execution and reconstruction) and the bundled reproduction
experiments with their pass/fail checks.
"""

import json
import time
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..core.circuit import Circuit, Observable
from ..core.cut_finder import canonical_executions, find_cuts, oracle_min_cuts
from ..core.generators import gen_ising_1d, gen_qaoa_mirrored, gen_random_clifford, ring_edges
from ..core.hardware import CalibrationSnapshot, NoiseLaw, gen_topology, load_calibration, parse_calibration
from ..core.layout import Layout, ScoredPlacement, norm_correlation, place_circuit, weighted_score
from ..core.qasm import parse_qasm
from ..core.qpd import generate_subexperiments, reconstruct
from ..core.simulator import NoisyExecConfig, exact_expectation, noisy_expectation
from ..models.report_models import (
    BackendKind, CheckResult, CheckStatus, ExperimentResult, ExperimentSpec, GeneratorSpec,
    ReconstructionReport, ReproduceSummary, RunReport, RunStatus, TimingReport, TopologySpec
)
from ..utils.config_utils import HICConfig
from ..utils.exceptions import (
    DegenerateVarianceError, EmptyInputError, ErrorCode, ErrorContext, FileError, OracleBudgetExceededError
)
from ..utils.logging_utils import LoggingUtils
from .execution_service import ExecutionService
from .report_service import CANDIDATE_COLUMNS, COMPARISON_COLUMNS, CORRELATION_COLUMNS, ReportService
from .selector_service import SelectorService, evaluate_candidate

logger = LoggingUtils.get_logger(__name__)

EXPERIMENTS = ('min_cut_table', 'weighted_score_arith', 'score_correlation', 'ising20', 'qaoa_mirrored')

# Short names the experiments are also known by
EXPERIMENT_ALIASES = {
    'table1': 'min_cut_table',
    'table4_arith': 'weighted_score_arith',
    'fig5_correlation': 'score_correlation',
}

FALCON_FIXTURE = 'falcon27_calibration.json'
QAOA_FIXTURE = 'qaoa12_snapshot.json'


def resolve_experiment(name: str) -> str:
    """Canonical experiment name for a name or alias"""
    return EXPERIMENT_ALIASES.get(name, name)


def fixture_text(name: str) -> str:
    """Contents of a bundled data file"""
    try:
        return (resources.files('hic.data') / name).read_text(encoding='utf-8')
    except (FileNotFoundError, ModuleNotFoundError) as e:
        raise FileError(
            f"Bundled fixture missing: {name}",
            ErrorCode.FIXTURE_MISSING,
            filename=name
        ) from e


def load_fixture_calibration(name: str) -> CalibrationSnapshot:
    return parse_calibration(json.loads(fixture_text(name)))


def build_circuit(generator: GeneratorSpec) -> Circuit:
    """Circuit described by a generator spec"""
    if generator.kind == 'ising':
        return gen_ising_1d(generator.num_qubits, generator.steps,
                            interaction=generator.interaction, ordering=generator.ordering)
    if generator.kind == 'clifford':
        return gen_random_clifford(generator.num_qubits, generator.steps, generator.seed)
    return gen_qaoa_mirrored(generator.num_qubits, ring_edges(range(generator.num_qubits)))


def build_snapshot(topology: TopologySpec) -> CalibrationSnapshot:
    law = NoiseLaw(outlier_fraction=topology.outlier_fraction)
    return gen_topology(topology.kind, topology.seed, noise_law=law, **topology.size)


def load_inputs(spec: ExperimentSpec) -> Tuple[Circuit, CalibrationSnapshot]:
    """Resolve the circuit and calibration sources of a spec"""
    if spec.circuit_path is not None:
        path = Path(spec.circuit_path)
        if not path.exists():
            raise FileError(f"Circuit file not found: {path}", ErrorCode.FILE_NOT_FOUND, filename=str(path))
        circuit = parse_qasm(path.read_text(encoding='utf-8'), name=path.stem)
    else:
        circuit = build_circuit(spec.generator)

    if spec.calibration_path is not None:
        snapshot = load_calibration(spec.calibration_path)
    else:
        snapshot = build_snapshot(spec.topology)
    return circuit, snapshot


def _config_for(spec: ExperimentSpec, config: HICConfig) -> HICConfig:
    return replace(
        config,
        puncture=replace(config.puncture, z_v=spec.z_v, z_e=spec.z_e),
        selection=replace(config.selection, k_max=spec.k_max, alpha=spec.alpha, jobs=spec.jobs),
        simulation=replace(config.simulation, backend=spec.backend.value, shots=spec.shots, seed=spec.seed),
    )


class ExperimentService:
    """Service for pipeline runs and reproduction experiments"""

    def __init__(self, config: Optional[HICConfig] = None):
        self.config = config or HICConfig()

    def run(self, spec: ExperimentSpec) -> Tuple[RunReport, TimingReport]:
        """Puncture, sweep, select, compare and (unless dry) execute the winner

        Args:
            spec: Validated experiment description

        Returns:
            (report, timing)
        """
        config = _config_for(spec, self.config)
        circuit, snapshot = load_inputs(spec)
        observable = Observable.from_label(spec.observable) if spec.observable else None
        timing = TimingReport()

        start = time.perf_counter()
        selector = SelectorService(config)
        comparison = selector.compare_with_baseline(circuit, snapshot, spec.z_v, spec.z_e, spec.k_max)
        selection = comparison.selection
        timing.preprocessing_seconds = time.perf_counter() - start

        reconstruction = None
        winner = selection.winner
        if winner is not None and not spec.dry_run:
            reconstruction = self._execute(circuit, winner, snapshot, observable, config, timing)

        selection_report = ReportService.selection_report(
            circuit.name, circuit.num_qubits, selection, spec.k_max, spec.alpha, config.puncture.qubit_metric
        )
        report = RunReport(
            status=RunStatus.SUCCESS if winner is not None else RunStatus.NO_STRATEGY,
            spec=spec,
            selection=selection_report,
            comparison=ReportService.comparison_report(comparison),
            reconstruction=reconstruction,
        )
        logger.info(
            "Run finished",
            extra={'circuit': circuit.name, 'status': report.status.value,
                   'executed': reconstruction is not None}
        )
        return report, timing

    def _execute(self, circuit: Circuit, winner, snapshot: CalibrationSnapshot,
                 observable: Optional[Observable], config: HICConfig,
                 timing: TimingReport) -> ReconstructionReport:
        start = time.perf_counter()
        subexperiments = generate_subexperiments(winner.strategy, observable)
        timing.preprocessing_seconds += time.perf_counter() - start

        start = time.perf_counter()
        executor = ExecutionService(config.simulation, jobs=config.selection.jobs)
        results = executor.execute_subexperiments(subexperiments, winner.placements, snapshot.noise)
        timing.execution_seconds = time.perf_counter() - start

        start = time.perf_counter()
        result = reconstruct(subexperiments, results)
        uncut = None
        if circuit.num_qubits <= config.simulation.max_qubits:
            uncut = exact_expectation(circuit, subexperiments.observable, config.simulation.max_qubits)
        timing.postprocessing_seconds = time.perf_counter() - start

        noisy = config.simulation.backend == 'noisy'
        return ReconstructionReport(
            backend=BackendKind(config.simulation.backend),
            shots=config.simulation.shots if noisy else None,
            seed=config.simulation.seed if noisy else None,
            expectation=round(result.expectation, 12),
            std_error=round(result.std_error, 12),
            shots_used=result.shots_used,
            subexperiments=subexperiments.num_subexperiments,
            uncut_exact=None if uncut is None else round(uncut, 12),
            absolute_error=None if uncut is None else round(abs(result.expectation - uncut), 12),
        )

    def reproduce(self, names: Optional[List[str]] = None,
                  output_dir: Optional[Path] = None) -> ReproduceSummary:
        """Run reproduction experiments and write their reports

        Args:
            names: Experiments to run (all when None)
            output_dir: Where per-experiment reports are written

        Returns:
            ReproduceSummary: Per-experiment checks and the overall verdict
        """
        runners: Dict[str, Callable[[], ExperimentResult]] = {
            'min_cut_table': self.min_cut_table,
            'weighted_score_arith': self.weighted_score_arith,
            'score_correlation': self.score_correlation,
            'ising20': self.ising20,
            'qaoa_mirrored': self.qaoa_mirrored,
        }
        writer = ReportService(output_dir) if output_dir is not None else None
        summary = ReproduceSummary()
        for name in [resolve_experiment(n) for n in names or EXPERIMENTS]:
            start = time.perf_counter()
            with ErrorContext('reproduce', {'experiment': name}):
                result = runners[name]()
            elapsed = time.perf_counter() - start
            logger.info("Experiment finished", extra={'experiment': name, 'status': result.status.value,
                                                      'elapsed_s': round(elapsed, 3)})
            summary.experiments.append(result)
            if writer is not None:
                writer.write_json(result, f"{name}.json")
                if name == 'score_correlation':
                    writer.write_csv(result.data['rows'], CORRELATION_COLUMNS, f"{name}.csv")
                if name in ('ising20', 'qaoa_mirrored'):
                    writer.write_csv(result.data['candidates'], CANDIDATE_COLUMNS, f"{name}_candidates.csv")
                    writer.write_csv([result.data['comparison']], COMPARISON_COLUMNS, f"{name}_comparison.csv")
        summary.passed = all(e.status != CheckStatus.FAIL for e in summary.experiments)
        if writer is not None:
            writer.write_json(summary, 'summary.json')
        return summary

    @staticmethod
    def _finish(name: str, checks: List[CheckResult], data: Dict[str, Any]) -> ExperimentResult:
        failed = any(c.status == CheckStatus.FAIL for c in checks)
        return ExperimentResult(name=name, status=CheckStatus.FAIL if failed else CheckStatus.PASS,
                                checks=checks, data=data)

    @staticmethod
    def _check(name: str, passed: bool, expected: Any = None, actual: Any = None) -> CheckResult:
        return CheckResult(name=name, status=CheckStatus.PASS if passed else CheckStatus.FAIL,
                           expected=expected, actual=actual)

    def min_cut_table(self) -> ExperimentResult:
        """Minimum cuts of the 6-qubit, 2-step Ising circuit for d = 2, 3, 4"""
        circuit = gen_ising_1d(6, 2, interaction='cx', ordering='brick')
        expected = {2: (8, 0, 43_046_721), 3: (4, 0, 6561), 4: (2, 1, 1296)}
        search = self.config.search
        rows, checks = [], []
        for d, (g, w, executions) in expected.items():
            row: Dict[str, Any] = {'device_constraint': d, 'expected': [g, w, executions]}
            found = find_cuts(circuit, d, max_expansions=search.max_expansions)
            row['find_cuts'] = [found.num_gate_cuts, found.num_wire_cuts, found.canonical_executions] if found else None
            try:
                oracle = oracle_min_cuts(circuit, d, max_actions=search.oracle_max_actions, cap=search.oracle_cap)
                row['oracle'] = [oracle.num_gate_cuts, oracle.num_wire_cuts, oracle.canonical_executions] \
                    if oracle else None
            except OracleBudgetExceededError:
                row['oracle'] = 'capped'

            if row['oracle'] not in (None, 'capped'):
                checks.append(self._check(f"oracle d={d}", row['oracle'] == [g, w, executions],
                                          [g, w, executions], row['oracle']))
            else:
                row['analytic_executions'] = canonical_executions(g, w)
            checks.append(self._check(
                f"find_cuts d={d} executions",
                found is not None and found.canonical_executions == executions,
                executions, row['find_cuts'][2] if found else None
            ))
            rows.append(row)
        return self._finish('min_cut_table', checks, {'circuit': circuit.name, 'rows': rows})

    def weighted_score_arith(self) -> ExperimentResult:
        """Weighted layout scores from tabulated per-subcircuit scores"""
        cases = [
            ([(1, 0.4221), (1, 0.5186), (1, 0.4221)], 3, 0.4542),
            ([(1, 0.4217), (2, 0.4353)], 3, 0.4308),
        ]
        checks, rows = [], []
        for index, (entries, n, expected) in enumerate(cases):
            value = weighted_score([_tabulated_placement(w, s) for w, s in entries], n)
            rows.append({'placements': entries, 'n': n, 'weighted_score': round(value, 6)})
            checks.append(self._check(f"case {index}", abs(value - expected) <= 5e-4, expected, round(value, 6)))
        return self._finish('weighted_score_arith', checks, {'rows': rows})

    def score_correlation(self, per_width: int = 10, widths: Tuple[int, ...] = (10, 20),
                         max_expansions: int = 2000) -> ExperimentResult:
        """Correlation between the weighted score and the spread term across candidates"""
        snapshot = gen_topology('heavy_hex', seed=7, noise_law=NoiseLaw(outlier_fraction=0.1), cells=2)
        selector = SelectorService(replace(
            self.config,
            puncture=replace(self.config.puncture, z_v=1.5, z_e=1.5),
            search=replace(self.config.search, max_expansions=max_expansions),
        ))
        punctured = selector.puncture(snapshot)
        components = list(punctured.components)
        sizes = [c.size for c in components]

        rows, coefficients = [], []
        for width in widths:
            for seed in range(per_width):
                circuit = gen_random_clifford(width, 3, seed)
                samples = []
                for d in range(2, max(sizes) + 1):
                    candidate = evaluate_candidate(circuit, d, components, snapshot.noise, None, max_expansions)
                    if candidate.feasible:
                        samples.append((candidate.weighted_score, candidate.norm2))
                try:
                    r = norm_correlation(samples)
                    coefficients.append(r)
                except (EmptyInputError, DegenerateVarianceError):
                    r = None
                rows.append({'circuit': circuit.name, 'num_qubits': width, 'samples': len(samples),
                             'pearson_r': None if r is None else round(r, 6)})

        checks = [
            self._check("coefficients within [-1, 1]", all(-1.0 <= r <= 1.0 for r in coefficients),
                        "[-1, 1]", [min(coefficients, default=None), max(coefficients, default=None)]),
            CheckResult(name="fraction above 0.9", status=CheckStatus.INFO,
                        actual=(sum(r > 0.9 for r in coefficients) / len(coefficients)) if coefficients else None),
        ]
        return self._finish('score_correlation', checks,
                            {'components': sizes, 'rows': rows, 'computed': len(coefficients)})

    def _comparison_experiment(self, circuit: Circuit, snapshot: CalibrationSnapshot,
                               z_v: float, z_e: float, k_max: int) -> Tuple[List[CheckResult], Dict[str, Any], Any]:
        selector = SelectorService(self.config)
        comparison = selector.compare_with_baseline(circuit, snapshot, z_v, z_e, k_max)
        selection_report = ReportService.selection_report(circuit.name, circuit.num_qubits,
                                                          comparison.selection, k_max)
        comparison_report = ReportService.comparison_report(comparison)
        winner = comparison.selection.winner
        feasible = [c for c in comparison.selection.all_candidates if c.feasible]
        checks = [
            self._check("winner exists", winner is not None),
            self._check("one candidate per constraint",
                        [c.device_constraint for c in comparison.selection.all_candidates]
                        == selection_report.puncture.candidate_constraints),
        ]
        if winner is not None:
            checks.append(self._check("winner minimizes the weighted score",
                                      all(winner.weighted_score <= c.weighted_score for c in feasible)))
        data = {
            'selection': selection_report.model_dump(mode='json'),
            'candidates': ReportService.candidate_rows(selection_report),
            'comparison': ReportService.comparison_row(circuit.name, comparison_report),
        }
        return checks, data, comparison

    def ising20(self) -> ExperimentResult:
        """20-qubit Ising chain on the 27-qubit heavy-hex fixture"""
        snapshot = load_fixture_calibration(FALCON_FIXTURE)
        circuit = gen_ising_1d(20, 2)
        checks, data, _ = self._comparison_experiment(circuit, snapshot, 2.0, 2.0, 4)
        return self._finish('ising20', checks, data)

    def qaoa_mirrored(self) -> ExperimentResult:
        """Mirrored 12-qubit QAOA on a path with one bad qubit, against equal partitioning"""
        snapshot = load_fixture_calibration(QAOA_FIXTURE)
        edges = ring_edges(range(8)) + ring_edges(range(8, 12)) + [(7, 8)]
        circuit = gen_qaoa_mirrored(12, edges)
        checks, data, comparison = self._comparison_experiment(circuit, snapshot, 2.0, 2.0, 2)

        winner, baseline = comparison.selection.winner, comparison.baseline
        if winner is not None and baseline is not None and baseline.strategy is not None:
            checks.append(self._check("HIC executions <= baseline",
                                      winner.strategy.canonical_executions <= baseline.strategy.canonical_executions,
                                      baseline.strategy.canonical_executions, winner.strategy.canonical_executions))
            checks.append(self._check("execution ratio >= 4", comparison.execution_ratio >= 4.0,
                                      4.0, comparison.execution_ratio))
        if winner is not None:
            subexperiments = generate_subexperiments(winner.strategy)
            executor = ExecutionService(replace(self.config.simulation, backend="exact"))
            results = executor.execute_subexperiments(subexperiments)
            value = reconstruct(subexperiments, results).expectation
            checks.append(self._check("exact reconstruction equals 1", abs(value - 1.0) < 1e-9, 1.0, value))
            data['reconstructed'] = value

        fidelities = self._noisy_fidelities(snapshot, comparison.selection.punctured.components[-1])
        checks.append(self._check(
            "noisy fidelity decreases with noise scale",
            all(a > b for seed_values in fidelities.values() for a, b in zip(seed_values, seed_values[1:])),
            "decreasing", fidelities
        ))
        data['noisy_fidelity'] = fidelities
        return self._finish('qaoa_mirrored', checks, data)

    def _noisy_fidelities(self, snapshot: CalibrationSnapshot, component,
                          scales: Tuple[float, ...] = (0.5, 1.0, 2.0),
                          seeds: Tuple[int, ...] = (1, 2, 3)) -> Dict[str, List[float]]:
        """Mean-Z of a small mirrored circuit on one island under scaled noise"""
        width = component.size
        circuit = gen_qaoa_mirrored(width, ring_edges(range(width)))
        values: Dict[str, List[float]] = {}
        for seed in seeds:
            series = []
            for scale in scales:
                noise = snapshot.noise.scaled(scale)
                placement = place_circuit(circuit, component, noise)
                cfg = NoisyExecConfig(shots=self.config.simulation.shots, seed=seed)
                estimate, _ = noisy_expectation(placement.layout.routed, placement.layout, noise, cfg)
                series.append(round(estimate, 6))
            values[f"seed_{seed}"] = series
        return values


def _tabulated_placement(width: int, score: float) -> ScoredPlacement:
    """Placement carrying a reported score without a routed circuit"""
    qubits = list(range(width))
    layout = Layout(
        mapping={q: q for q in qubits},
        component_id=0,
        routed=Circuit(width),
        physical_qubits=frozenset(qubits),
        allowed_edges=frozenset(),
    )
    return ScoredPlacement(layout=layout, score=score, width=width)


def run_experiment(spec: ExperimentSpec, config: Optional[HICConfig] = None) -> Tuple[RunReport, TimingReport]:
    return ExperimentService(config).run(spec)

