"""
BraneGauge Publishers Module

Output destinations for computation reports.
Currently supports JSON reports and TSV tables.
"""

from .report_writer import ReportWriter, Table

__all__ = ["ReportWriter", "Table"]
