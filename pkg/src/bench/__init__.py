from .design import CSV_COLUMNS, ExperimentDesign, ResultRow, read_rows, write_rows, rows_to_csv
from .sweep import (
    SweepTask,
    build_tasks,
    run_task,
    run_sweep,
    resolve_parallelism,
    paired_improvement,
    attach_improvements
)
from .summary import MissingBaselineError, SummaryRow, confidence_interval, summarize, format_summary
from .reference import REFERENCE_TARGETS, ReferenceRow, ReferenceReport, first_divergence, reproduce_reference_runs
from .dot import emit_dot

__all__ = [
    'CSV_COLUMNS',
    'ExperimentDesign',
    'ResultRow',
    'read_rows',
    'write_rows',
    'rows_to_csv',
    'SweepTask',
    'build_tasks',
    'run_task',
    'run_sweep',
    'resolve_parallelism',
    'paired_improvement',
    'attach_improvements',
    'MissingBaselineError',
    'SummaryRow',
    'confidence_interval',
    'summarize',
    'format_summary',
    'REFERENCE_TARGETS',
    'ReferenceRow',
    'ReferenceReport',
    'first_divergence',
    'reproduce_reference_runs',
    'emit_dot'
]
