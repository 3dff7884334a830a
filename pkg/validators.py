"""
hq Input Validation

This module contains the exception hierarchy and validation functions:
- Validation exceptions for malformed user input
- Domain exceptions raised by the algebra layers
- Window, depth and level validation
- Rational / q-value / field-mode validation
- Verification suite name validation
"""

import re
from fractions import Fraction
from typing import Any, Optional

# Import configuration
import config
from constants import VERIFY_SUITES

# ============================================================================
# Validation Exceptions
# ============================================================================

class ValidationError(Exception):
    """Base exception for validation errors"""
    pass

class WindowValidationError(ValidationError):
    """Raised when a window or index range is malformed"""
    pass

class SequenceValidationError(ValidationError):
    """Raised when a sequence, tower or level parameter is malformed"""
    pass

class FieldConfigError(ValidationError):
    """Raised when the ground field configuration is invalid"""
    pass

class SuiteNameError(ValidationError):
    """Raised when an unknown verification suite is requested"""
    pass

class ExpressionSyntaxError(ValidationError):
    """Raised when an expression does not conform to the element grammar"""

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}")
        self.reason = message
        self.text = text
        self.position = position

# ============================================================================
# Domain Exceptions
# ============================================================================

class HQError(Exception):
    """Base exception for failures inside the algebra layers"""
    pass

class WindowAdequacyError(HQError):
    """Raised when a computation needs data outside its window"""

    def __init__(self, message: str, index: Any = None):
        super().__init__(message)
        self.index = index

class TriangularityError(HQError):
    """Raised when a tabulated map is not triangular with respect to y-degree"""
    pass

class NotCoalgebraMapError(HQError):
    """Raised when a map fails the coalgebra-map check"""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report

class DecompositionError(HQError):
    """Raised when an automorphism does not have the expected factored shape"""
    pass

class ConfigFileError(HQError):
    """Raised when the JSON config file cannot be used"""
    pass

# ============================================================================
# Window Validation
# ============================================================================

def validate_window(n_lo: int, n_hi: int, m_max: int) -> tuple[int, int, int]:
    """
    Validate window bounds.

    Args:
        n_lo: Lowest x-exponent
        n_hi: Highest x-exponent
        m_max: Highest y-exponent

    Returns:
        The validated (n_lo, n_hi, m_max) triple

    Raises:
        WindowValidationError: If the bounds are inconsistent
    """
    for name, value in (("n_lo", n_lo), ("n_hi", n_hi), ("m_max", m_max)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise WindowValidationError(f"Window bound {name} must be an integer, got {value!r}")

    if n_lo > n_hi:
        raise WindowValidationError(f"Window is empty: n_lo={n_lo} exceeds n_hi={n_hi}")

    if m_max < 0:
        raise WindowValidationError(f"Window m_max must be non-negative, got {m_max}")

    return n_lo, n_hi, m_max

def parse_window_text(text: str) -> tuple[int, int, int]:
    """
    Parse a window given as "nlo,nhi,mmax".

    Args:
        text: Window text from the command line or config

    Returns:
        The validated (n_lo, n_hi, m_max) triple

    Raises:
        WindowValidationError: If the text is malformed
    """
    if text is None or not str(text).strip():
        raise WindowValidationError("Window cannot be empty")

    parts = [part.strip() for part in str(text).split(",")]
    if len(parts) != 3:
        raise WindowValidationError(f"Window must look like nlo,nhi,mmax, got {text!r}")

    try:
        n_lo, n_hi, m_max = (int(part) for part in parts)
    except ValueError:
        raise WindowValidationError(f"Window bounds must be integers, got {text!r}")

    return validate_window(n_lo, n_hi, m_max)

def parse_index_range(text: str) -> tuple[int, int]:
    """
    Parse an index range given as "lo,hi".

    Raises:
        WindowValidationError: If the text is malformed or empty
    """
    parts = [part.strip() for part in str(text).split(",")]
    if len(parts) != 2:
        raise WindowValidationError(f"Index range must look like lo,hi, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise WindowValidationError(f"Index range bounds must be integers, got {text!r}")
    if lo > hi:
        raise WindowValidationError(f"Index range is empty: {lo} exceeds {hi}")
    return lo, hi

# ============================================================================
# Depth and Level Validation
# ============================================================================

def validate_depth(depth: int) -> int:
    """
    Validate a tower depth.

    Raises:
        SequenceValidationError: If depth is not a positive integer
    """
    if isinstance(depth, bool) or not isinstance(depth, int):
        raise SequenceValidationError(f"Depth must be an integer, got {depth!r}")
    if depth < 1:
        raise SequenceValidationError(f"Depth must be at least 1, got {depth}")
    if depth > config.MAX_DEPTH:
        raise SequenceValidationError(
            f"Depth too large. Maximum depth is {config.MAX_DEPTH}"
        )
    return depth

def validate_level(s: int) -> int:
    """Validate the level s of a φ^(s) generator."""
    if isinstance(s, bool) or not isinstance(s, int):
        raise SequenceValidationError(f"Level must be an integer, got {s!r}")
    if s < 1:
        raise SequenceValidationError(f"Level s must be at least 1, got {s}")
    return s

# ============================================================================
# Scalar and Field Validation
# ============================================================================

_RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')

def validate_rational_text(text: str) -> Fraction:
    """
    Validate and parse a rational literal "p" or "p/r".

    Args:
        text: Rational literal

    Returns:
        The parsed Fraction

    Raises:
        ValidationError: If the literal is malformed or has a zero denominator
    """
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)

    match = _RATIONAL_PATTERN.match(str(text))
    if not match:
        raise ValidationError(f"Not a rational literal: {text!r}")

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValidationError(f"Zero denominator in {text!r}")

    return Fraction(numerator, denominator)

def validate_q_value(q: Any) -> Fraction:
    """
    Validate a numeric q.

    q = 0 and q = -1 are rejected; q = 1 is allowed.

    Raises:
        FieldConfigError: If q is degenerate or not rational
    """
    try:
        value = q if isinstance(q, Fraction) else validate_rational_text(q)
    except ValidationError as e:
        raise FieldConfigError(f"Invalid q value: {e}")

    if value == 0:
        raise FieldConfigError("q = 0 is not allowed: x and y would not generate a Hopf algebra")
    if value == -1:
        raise FieldConfigError("q = -1 is not allowed: (2)_q vanishes")

    return value

def validate_field_mode(mode: Optional[str]) -> str:
    """Validate the field mode name."""
    normalized = (mode or "").strip().lower()
    if normalized not in config.FIELD_MODES:
        raise FieldConfigError(
            f"Unknown field mode {mode!r}. Expected one of: {', '.join(config.FIELD_MODES)}"
        )
    return normalized

# ============================================================================
# Verification Suite Validation
# ============================================================================

def validate_suite_name(name: str) -> str:
    """
    Validate a verification suite name.

    Raises:
        SuiteNameError: If the suite is unknown
    """
    normalized = (name or "").strip().lower()
    if normalized != "all" and normalized not in VERIFY_SUITES:
        raise SuiteNameError(
            f"Unknown suite {name!r}. Available: {', '.join(list(VERIFY_SUITES) + ['all'])}"
        )
    return normalized
