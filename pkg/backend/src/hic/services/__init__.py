"""Services tying the core algorithms into selection, execution and reporting"""

from .selector_service import SelectorService, select, compare_with_baseline
from .execution_service import ExecutionService, execute_subexperiments
from .report_service import ReportService
from .experiment_service import ExperimentService, run_experiment

__all__ = [
    'SelectorService',
    'select',
    'compare_with_baseline',
    'ExecutionService',
    'execute_subexperiments',
    'ReportService',
    'ExperimentService',
    'run_experiment'
]
