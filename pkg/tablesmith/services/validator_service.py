"""
Structural validation of HTML tables.
"""
import logging

from tablesmith.schemas.checker import ValidationReport
from tablesmith.services.table_model import inspect_table

logger = logging.getLogger(__name__)


def validate_table(html: str) -> ValidationReport:
    """Total: every parse problem becomes a defect, nothing raises."""
    inspection = inspect_table(html)
    return ValidationReport(valid=inspection.valid, defects=list(inspection.defects))
