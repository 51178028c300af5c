"""
Command-line surface

Subcommands: puncture, find, score, select, compare, run, reproduce,
gen-circuit and gen-calibration. Reports go to stdout (or files), logs to
stderr. Exit codes: 0 success, 1 internal error, 2 input error, 3 no
strategy found, 4 computation limit reached.
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import click
from dotenv import load_dotenv

from ..core.circuit import Circuit, emit_qasm
from ..core.cut_finder import find_cuts, oracle_min_cuts, strategy_document, strategy_from_document
from ..core.generators import gen_ising_1d, gen_qaoa_mirrored, gen_random_clifford, ring_edges
from ..core.hardware import NoiseLaw, calibration_document, gen_topology, load_calibration, save_calibration
from ..core.layout import weighted_score
from ..core.puncture import full_map_component
from ..core.qasm import parse_qasm
from ..models.report_models import ExperimentSpec, GeneratorSpec, PlacementReport
from ..services.experiment_service import EXPERIMENT_ALIASES, EXPERIMENTS, ExperimentService
from ..services.report_service import CANDIDATE_COLUMNS, COMPARISON_COLUMNS, ReportService
from ..services.selector_service import SelectorService, best_placement
from ..utils.config_utils import ConfigUtils, HICConfig
from ..utils.exceptions import ErrorCode, ExitCode, FileError, InvalidStrategyError, NoStrategyFoundError
from ..utils.logging_utils import LogConfig, LogFormat, LoggingUtils
from .error_handler import handle_errors

logger = LoggingUtils.get_logger(__name__)


def _read_circuit(path: str) -> Circuit:
    file_path = Path(path)
    if not file_path.exists():
        raise FileError(f"Circuit file not found: {file_path}", ErrorCode.FILE_NOT_FOUND, filename=str(file_path))
    return parse_qasm(file_path.read_text(encoding='utf-8'), name=file_path.stem)


def _emit(payload: Any, output: Optional[str]) -> None:
    """Write a pydantic model, dict or text to a file or stdout"""
    if hasattr(payload, 'model_dump_json'):
        text = payload.model_dump_json(indent=2) + '\n'
    elif isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2) + '\n'
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text, encoding='utf-8')
    else:
        click.echo(text, nl=False)


def _config(ctx: click.Context) -> HICConfig:
    return ctx.obj['config']


def _overrides(**values: Any) -> Dict[str, Any]:
    """Dot-path overrides for the flags that were actually given"""
    config: Dict[str, Any] = {}
    for key_path, value in values.items():
        if value is not None:
            ConfigUtils.set_config_value(config, key_path.replace('__', '.'), value)
    return config


def _with_overrides(ctx: click.Context, **values: Any) -> HICConfig:
    base = ConfigUtils.to_dict(_config(ctx))
    return ConfigUtils.build_config(base, _overrides(**values))


@click.group()
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
              help='INI, YAML or JSON configuration file (default: $HIC_CONFIG)')
@click.option('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
@click.option('--log-format', default=None, type=click.Choice([f.value for f in LogFormat]))
@click.option('--log-file', default=None, type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors
def cli(ctx: click.Context, config_file: Optional[str], log_level: Optional[str],
        log_format: Optional[str], log_file: Optional[str]) -> None:
    """Hardware-informed circuit cutting"""
    load_dotenv()
    config = ConfigUtils.load(config_file, _overrides(output__log_level=log_level,
                                                      output__log_format=log_format,
                                                      output__log_file=log_file))
    LoggingUtils.setup_logging(LogConfig(
        level=config.output.log_level,
        format_type=config.output.log_format,
        log_file=config.output.log_file,
    ))
    ctx.ensure_object(dict)
    ctx.obj['config'] = config


@cli.command('gen-circuit')
@click.option('--kind', type=click.Choice(['ising', 'clifford', 'qaoa']), required=True)
@click.option('--qubits', '-n', type=int, required=True)
@click.option('--steps', type=int, default=2, show_default=True, help='Trotter steps or Clifford depth')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--interaction', type=click.Choice(['rzz', 'cx']), default='rzz', show_default=True)
@click.option('--ordering', type=click.Choice(['sequential', 'brick']), default='sequential', show_default=True)
@click.option('--gamma', type=float, default=0.7, show_default=True)
@click.option('--beta', type=float, default=0.4, show_default=True)
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@handle_errors
def gen_circuit(kind, qubits, steps, seed, interaction, ordering, gamma, beta, output):
    """Write a benchmark circuit as OpenQASM"""
    if kind == 'ising':
        circuit = gen_ising_1d(qubits, steps, interaction=interaction, ordering=ordering)
    elif kind == 'clifford':
        circuit = gen_random_clifford(qubits, steps, seed)
    else:
        circuit = gen_qaoa_mirrored(qubits, ring_edges(range(qubits)), gamma=gamma, beta=beta)
    _emit(emit_qasm(circuit), output)


@cli.command('gen-calibration')
@click.option('--kind', type=click.Choice(['line', 'grid', 'heavy_hex']), required=True)
@click.option('--qubits', '-n', type=int, default=None, help='Line length')
@click.option('--rows', type=int, default=None)
@click.option('--cols', type=int, default=None)
@click.option('--cells', type=int, default=2, show_default=True, help='Heavy-hex unit cells')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--outlier-fraction', type=float, default=0.0, show_default=True)
@click.option('--outlier-multiplier', type=float, default=5.0, show_default=True)
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@handle_errors
def gen_calibration(kind, qubits, rows, cols, cells, seed, outlier_fraction, outlier_multiplier, output):
    """Write a synthetic calibration snapshot"""
    size = {'line': {'n': qubits}, 'grid': {'rows': rows, 'cols': cols}, 'heavy_hex': {'cells': cells}}[kind]
    size = {k: v for k, v in size.items() if v is not None}
    law = NoiseLaw(outlier_fraction=outlier_fraction, outlier_multiplier=outlier_multiplier)
    snapshot = gen_topology(kind, seed, noise_law=law, **size)
    if output:
        save_calibration(snapshot, output)
    else:
        _emit(calibration_document(snapshot).model_dump(by_alias=True), None)


@cli.command('puncture')
@click.option('--calibration', '-c', required=True, type=click.Path(dir_okay=False))
@click.option('--zv', type=float, default=None, help='Qubit Z-score threshold')
@click.option('--ze', type=float, default=None, help='Edge Z-score threshold')
@click.option('--qubit-metric', type=click.Choice(['readout', 'sx', 'combined']), default=None)
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def puncture_cmd(ctx, calibration, zv, ze, qubit_metric, output):
    """Remove outlier qubits and edges and list the remaining islands"""
    config = _with_overrides(ctx, puncture__qubit_metric=qubit_metric)
    snapshot = load_calibration(calibration)
    punctured = SelectorService(config).puncture(snapshot, zv, ze)
    _emit(ReportService.puncture_report(punctured, config.puncture.qubit_metric), output)


@cli.command('find')
@click.option('--circuit', required=True, type=click.Path(dir_okay=False))
@click.option('--constraint', '--device-constraint', '-d', 'device_constraint', type=int, required=True,
              help='Maximum subcircuit width d')
@click.option('--budget', '-k', type=int, default=None, help='Cut budget (unbounded by default)')
@click.option('--oracle', is_flag=True, help='Exhaustive minimum instead of the best-first search')
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None, help='Strategy JSON path')
@click.pass_context
@handle_errors
def find_cmd(ctx, circuit, device_constraint, budget, oracle, output):
    """Find the cheapest cut strategy for one device constraint"""
    config = _config(ctx)
    logical = _read_circuit(circuit)
    if oracle:
        strategy = oracle_min_cuts(logical, device_constraint, max_actions=config.search.oracle_max_actions,
                                   cap=config.search.oracle_cap)
    else:
        strategy = find_cuts(logical, device_constraint, k_max=budget,
                             max_expansions=config.search.max_expansions)
    if strategy is None:
        raise NoStrategyFoundError(details={'device_constraint': device_constraint, 'k_max': budget})

    document = strategy_document(strategy)
    document['overhead'] = ReportService.strategy_report(strategy).model_dump()
    _emit(document, output)


@cli.command('score')
@click.option('--strategy', 'strategy_path', required=True, type=click.Path(dir_okay=False))
@click.option('--calibration', '-c', required=True, type=click.Path(dir_okay=False))
@click.option('--zv', type=float, default=None, help='Place on punctured islands (needs --ze)')
@click.option('--ze', type=float, default=None)
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def score_cmd(ctx, strategy_path, calibration, zv, ze, output):
    """Best layouts, layout scores and weighted score of a saved strategy"""
    path = Path(strategy_path)
    if not path.exists():
        raise FileError(f"Strategy file not found: {path}", ErrorCode.FILE_NOT_FOUND, filename=str(path))
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise InvalidStrategyError(f"strategy file is not valid JSON: {e.msg}") from e
    strategy = strategy_from_document(document)
    snapshot = load_calibration(calibration)

    if zv is not None or ze is not None:
        components = SelectorService(_config(ctx)).puncture(snapshot, zv, ze).components
    else:
        components = [full_map_component(snapshot, 0)]
    placements = best_placement(strategy, components, snapshot.noise)

    rows, placed = [], []
    for index, placement in enumerate(placements):
        if placement is None:
            rows.append({'subcircuit': index, 'width': strategy.subcircuits[index].width, 'placement': None})
            continue
        placed.append(placement)
        rows.append(PlacementReport(
            subcircuit=index,
            width=placement.width,
            component_id=placement.layout.component_id,
            physical_qubits=[placement.layout.mapping[q] for q in range(placement.width)],
            score=round(placement.score, 10),
            swaps=placement.layout.swaps,
        ).model_dump())
    complete = len(placed) == len(placements)
    _emit({
        'placements': rows,
        'weighted_score': round(weighted_score(placed, sum(strategy.widths)), 10) if complete else None,
        'overhead': ReportService.strategy_report(strategy).model_dump(),
    }, output)
    if not complete:
        raise NoStrategyFoundError("some subcircuits fit no component")


def _selection_options(func):
    options = [
        click.option('--circuit', required=True, type=click.Path(dir_okay=False)),
        click.option('--calibration', '-c', required=True, type=click.Path(dir_okay=False)),
        click.option('--zv', type=float, default=None, help='Qubit Z-score threshold'),
        click.option('--ze', type=float, default=None, help='Edge Z-score threshold'),
        click.option('--budget', '-k', type=int, default=None, help='Cut budget k_max'),
        click.option('--jobs', '-j', type=int, default=None, help='Parallel candidate evaluations'),
        click.option('--alpha', type=float, default=None, help='Objective weight of the weighted score'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@cli.command('select')
@_selection_options
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None, help='Candidate table')
@click.pass_context
@handle_errors
def select_cmd(ctx, circuit, calibration, zv, ze, budget, jobs, alpha, output, csv_path):
    """Sweep device constraints and select the best-scoring strategy"""
    config = _with_overrides(ctx, selection__k_max=budget, selection__jobs=jobs, selection__alpha=alpha)
    logical = _read_circuit(circuit)
    snapshot = load_calibration(calibration)
    result = SelectorService(config).select(logical, snapshot, zv, ze, config.selection.k_max)
    report = ReportService.selection_report(logical.name, logical.num_qubits, result, config.selection.k_max,
                                            config.selection.alpha, config.puncture.qubit_metric)
    _emit(report, output)
    if csv_path:
        ReportService().write_csv(ReportService.candidate_rows(report), CANDIDATE_COLUMNS, csv_path)
    if result.winner is None:
        raise NoStrategyFoundError(details={'k_max': config.selection.k_max})


@cli.command('compare')
@_selection_options
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None)
@click.option('--csv', 'csv_path', type=click.Path(dir_okay=False), default=None, help='Comparison row')
@click.pass_context
@handle_errors
def compare_cmd(ctx, circuit, calibration, zv, ze, budget, jobs, alpha, output, csv_path):
    """Compare the selected strategy against equal partitioning"""
    config = _with_overrides(ctx, selection__k_max=budget, selection__jobs=jobs, selection__alpha=alpha)
    logical = _read_circuit(circuit)
    snapshot = load_calibration(calibration)
    comparison = SelectorService(config).compare_with_baseline(logical, snapshot, zv, ze, config.selection.k_max)
    report = ReportService.comparison_report(comparison)
    _emit(report, output)
    if csv_path:
        ReportService().write_csv([ReportService.comparison_row(logical.name, report)], COMPARISON_COLUMNS,
                                  csv_path)
    if comparison.selection.winner is None:
        raise NoStrategyFoundError(details={'k_max': config.selection.k_max})


@cli.command('run')
@click.option('--circuit', type=click.Path(dir_okay=False), default=None, help='OpenQASM file')
@click.option('--generator', type=click.Choice(['ising', 'clifford', 'qaoa']), default=None)
@click.option('--qubits', '-n', type=int, default=None, help='Generator width')
@click.option('--steps', type=int, default=2, show_default=True)
@click.option('--calibration', '-c', required=True, type=click.Path(dir_okay=False))
@click.option('--zv', type=float, default=None)
@click.option('--ze', type=float, default=None)
@click.option('--budget', '-k', type=int, default=None)
@click.option('--backend', type=click.Choice(['exact', 'noisy']), default=None)
@click.option('--shots', type=int, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--jobs', '-j', type=int, default=None)
@click.option('--observable', default=None, help='Pauli label such as ZZII (default: mean Z)')
@click.option('--dry-run', is_flag=True, help='Select only, skip execution')
@click.option('--output-dir', type=click.Path(file_okay=False), default=None)
@click.pass_context
@handle_errors
def run_cmd(ctx, circuit, generator, qubits, steps, calibration, zv, ze, budget, backend, shots, seed, jobs,
            observable, dry_run, output_dir):
    """Full pipeline: select, compare, execute and reconstruct"""
    config = _with_overrides(
        ctx, puncture__z_v=zv, puncture__z_e=ze, selection__k_max=budget, selection__jobs=jobs,
        simulation__backend=backend, simulation__shots=shots, simulation__seed=seed,
        output__output_dir=output_dir,
    )
    spec = ExperimentSpec(
        circuit_path=circuit,
        generator=GeneratorSpec(kind=generator, num_qubits=qubits, steps=steps) if generator else None,
        calibration_path=calibration,
        z_v=config.puncture.z_v,
        z_e=config.puncture.z_e,
        k_max=config.selection.k_max,
        backend=config.simulation.backend,
        shots=config.simulation.shots,
        seed=config.simulation.seed,
        jobs=config.selection.jobs,
        alpha=config.selection.alpha,
        observable=observable,
        dry_run=dry_run,
        output_dir=config.output.output_dir,
    )
    report, timing = ExperimentService(config).run(spec)

    writer = ReportService(spec.output_dir)
    writer.write_json(report, 'report.json')
    writer.write_csv(ReportService.candidate_rows(report.selection), CANDIDATE_COLUMNS, 'candidates.csv')
    writer.write_csv([ReportService.comparison_row(report.selection.circuit, report.comparison)],
                     COMPARISON_COLUMNS, 'comparison.csv')
    writer.write_timing(timing)
    _emit(report, None)
    if report.selection.winner is None:
        raise NoStrategyFoundError(details={'k_max': spec.k_max})


@cli.command('reproduce')
@click.argument('name', type=click.Choice(list(EXPERIMENTS) + list(EXPERIMENT_ALIASES) + ['all']))
@click.option('--output-dir', type=click.Path(file_okay=False), default=None)
@click.pass_context
@handle_errors
def reproduce_cmd(ctx, name, output_dir):
    """Run a bundled reproduction experiment (or all of them)"""
    config = _with_overrides(ctx, output__output_dir=output_dir)
    names = list(EXPERIMENTS) if name == 'all' else [name]
    summary = ExperimentService(config).reproduce(names, Path(config.output.output_dir))
    for experiment in summary.experiments:
        click.echo(f"{experiment.status.value:5} {experiment.name}")
        for check in experiment.checks:
            click.echo(f"      {check.status.value:5} {check.name}")
    if not summary.passed:
        sys.exit(ExitCode.INTERNAL)


def main() -> None:
    cli(obj={})


if __name__ == '__main__':
    main()
