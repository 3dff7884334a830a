"""
hq Error Handling

This module contains error handling functionality including:
- Logging configuration
- User-friendly error messages and exit codes for the command line
- Machine-readable failure reports for verification runs
"""

import json
import logging
from typing import Any, Iterable, Optional

# Import configuration
import config

from constants import EXIT_INTERNAL_ERROR, EXIT_USER_ERROR
from validators import (
    ConfigFileError,
    DecompositionError,
    ExpressionSyntaxError,
    FieldConfigError,
    NotCoalgebraMapError,
    TriangularityError,
    ValidationError,
    WindowAdequacyError,
)

# ============================================================================
# Logging Configuration
# ============================================================================

# Configure logging
logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL, logging.WARNING),
    format=config.LOG_FORMAT
)
logger = logging.getLogger(__name__)

def configure_logging(level: Optional[str] = None) -> None:
    """
    Re-level the root logger.

    Args:
        level: Level name (DEBUG, INFO, ...); defaults to config.LOG_LEVEL
    """
    name = (level or config.LOG_LEVEL).upper()
    logging.getLogger().setLevel(getattr(logging, name, logging.WARNING))
    logger.debug(f"Log level set to {name}")

# ============================================================================
# Error Message Formatting
# ============================================================================

def _caret_line(error: ExpressionSyntaxError) -> str:
    if not error.text:
        return ""
    return f"\n  {error.text}\n  {' ' * error.position}^"

def get_user_friendly_error_message(error: Exception) -> tuple[str, int]:
    """
    Convert exceptions into command-line messages.

    Args:
        error: The exception object

    Returns:
        Tuple of (user_message, exit_code)
    """
    if isinstance(error, ExpressionSyntaxError):
        return (
            f"Syntax error: {error.reason} at position {error.position}{_caret_line(error)}",
            EXIT_USER_ERROR
        )

    if isinstance(error, WindowAdequacyError):
        where = f" (missing index {error.index})" if error.index is not None else ""
        return (
            f"Window too small: {error}{where}\n"
            "Widen the window with --window nlo,nhi,mmax and try again.",
            EXIT_USER_ERROR
        )

    if isinstance(error, NotCoalgebraMapError):
        report = error.report
        where = ""
        if report is not None and report.counterexample is not None:
            n, m = report.counterexample
            where = f"\nFirst counterexample: x^{n} y^{m} ({report.reason})"
        return f"Not a coalgebra map: {error}{where}", EXIT_USER_ERROR

    if isinstance(error, TriangularityError):
        return f"Not triangular: {error}", EXIT_USER_ERROR

    if isinstance(error, DecompositionError):
        return f"Cannot decompose: {error}", EXIT_USER_ERROR

    if isinstance(error, FieldConfigError):
        return f"Field configuration error: {error}", EXIT_USER_ERROR

    if isinstance(error, ConfigFileError):
        return f"Config file error: {error}", EXIT_USER_ERROR

    if isinstance(error, ValidationError):
        return f"Invalid input: {error}", EXIT_USER_ERROR

    if isinstance(error, json.JSONDecodeError):
        return f"Invalid JSON argument: {error}", EXIT_USER_ERROR

    if isinstance(error, OSError):
        return f"File error: {error}", EXIT_USER_ERROR

    # Generic error
    logger.error(f"Unexpected error: {error}", exc_info=True)
    return (
        f"Unexpected error: {str(error)[:200]}\n"
        "Rerun with --verbose for a traceback.",
        EXIT_INTERNAL_ERROR
    )

# ============================================================================
# Failure Reports
# ============================================================================

def format_failure_report(reports: Iterable[Any]) -> str:
    """
    JSON text for failed verification reports.

    Args:
        reports: SuiteReport values

    Returns:
        Sorted-key JSON with only the failing cases of each failing suite
    """
    failing = []
    for report in reports:
        if report.passed:
            continue
        failing.append({
            "suite": report.suite,
            "failed": [case.to_json() for case in report.failures],
        })
    return json.dumps({"passed": not failing, "failures": failing}, indent=2, sort_keys=True)
