"""Pydantic models for calibration files and reports"""

from .calibration_model import CalibrationDocument, QubitCalibration, EdgeCalibration
from .report_models import (
    ExperimentSpec, RunReport, SelectionReport, CandidateReport, ComparisonReport,
    PunctureReport, ReconstructionReport, TimingReport, ReproduceSummary
)

__all__ = [
    'CalibrationDocument',
    'QubitCalibration',
    'EdgeCalibration',
    'ExperimentSpec',
    'RunReport',
    'SelectionReport',
    'CandidateReport',
    'ComparisonReport',
    'PunctureReport',
    'ReconstructionReport',
    'TimingReport',
    'ReproduceSummary'
]
