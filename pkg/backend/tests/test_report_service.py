"""Tests for report models, JSON documents and CSV rows"""

import csv
import json

import pytest

from hic.services.report_service import CANDIDATE_COLUMNS, COMPARISON_COLUMNS, ReportService
from hic.services.selector_service import SelectorService
from hic.models.report_models import TimingReport


@pytest.fixture
def comparison(ising6, split_line_snapshot, config):
    return SelectorService(config).compare_with_baseline(ising6, split_line_snapshot)


@pytest.mark.unit
class TestReportModels:

    def test_puncture_report(self, split_line_snapshot, config):
        punctured = SelectorService(config).puncture(split_line_snapshot)
        report = ReportService.puncture_report(punctured)
        assert report.outlier_qubits == [4]
        assert report.retained_qubits == [0, 1, 2, 3, 5, 6, 7, 8]
        assert [c.qubits for c in report.components] == [[0, 1, 2, 3], [5, 6, 7, 8]]
        assert report.candidate_constraints == [4]

    def test_selection_report(self, comparison, ising6):
        report = ReportService.selection_report(ising6.name, 6, comparison.selection, k_max=4)
        winner = report.winner
        assert winner.feasible
        assert winner.strategy.gamma ** 2 == winner.strategy.canonical_executions
        assert len(winner.placements) == len(winner.strategy.widths)
        assert all(4 not in p.physical_qubits for p in winner.placements)

    def test_reports_have_no_timestamps(self, comparison, ising6):
        report = ReportService.selection_report(ising6.name, 6, comparison.selection, k_max=4)
        text = report.model_dump_json()
        assert 'seconds' not in text
        assert 'timestamp' not in text

    def test_comparison_row(self, comparison, ising6):
        report = ReportService.comparison_report(comparison)
        row = ReportService.comparison_row(ising6.name, report)
        assert set(row) == set(COMPARISON_COLUMNS)
        assert row['baseline_d'] == 3
        assert row['delta_cuts'] == row['baseline_cuts'] - row['winner_cuts']


@pytest.mark.unit
class TestWriters:

    def test_write_json_and_csv(self, comparison, ising6, tmp_path):
        service = ReportService(tmp_path / 'out')
        report = ReportService.selection_report(ising6.name, 6, comparison.selection, k_max=4)
        json_path = service.write_json(report, 'selection.json')
        assert json.loads(json_path.read_text())['circuit'] == ising6.name

        csv_path = service.write_csv(ReportService.candidate_rows(report), CANDIDATE_COLUMNS, 'candidates.csv')
        with csv_path.open() as handle:
            rows = list(csv.DictReader(handle))
        assert [r['device_constraint'] for r in rows] == ['4']
        assert list(rows[0]) == CANDIDATE_COLUMNS

    def test_timing_is_separate(self, tmp_path):
        path = ReportService(tmp_path).write_timing(TimingReport(execution_seconds=1.5))
        assert path.name == 'timing.json'
        assert json.loads(path.read_text())['execution_seconds'] == 1.5
