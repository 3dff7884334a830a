"""
Unit tests for validators.py

Tests for window, depth, level, rational, field and suite-name validation.
"""

import pytest
from fractions import Fraction

import config
from validators import (
    ExpressionSyntaxError,
    FieldConfigError,
    HQError,
    SequenceValidationError,
    SuiteNameError,
    ValidationError,
    WindowAdequacyError,
    WindowValidationError,
    parse_index_range,
    parse_window_text,
    validate_depth,
    validate_field_mode,
    validate_level,
    validate_q_value,
    validate_rational_text,
    validate_suite_name,
    validate_window,
)

# ============================================================================
# Exception Hierarchy Tests
# ============================================================================

@pytest.mark.unit
class TestExceptions:
    """Tests for the exception classes"""

    def test_input_errors_are_validation_errors(self):
        """Test every input error derives from ValidationError"""
        for cls in (WindowValidationError, SequenceValidationError, FieldConfigError,
                    SuiteNameError, ExpressionSyntaxError):
            assert issubclass(cls, ValidationError)

    def test_domain_errors_are_separate(self):
        """Test domain errors do not derive from ValidationError"""
        assert issubclass(WindowAdequacyError, HQError)
        assert not issubclass(WindowAdequacyError, ValidationError)

    def test_syntax_error_position(self):
        """Test ExpressionSyntaxError keeps the reason and position"""
        error = ExpressionSyntaxError("Unexpected '$'", "x $", 2)
        assert error.reason == "Unexpected '$'"
        assert error.position == 2
        assert str(error) == "Unexpected '$' at position 2"

    def test_adequacy_error_index(self):
        """Test WindowAdequacyError carries the missing index"""
        assert WindowAdequacyError("too small", index=(3, 0)).index == (3, 0)

# ============================================================================
# Window Validation Tests
# ============================================================================

@pytest.mark.unit
class TestWindowValidation:
    """Tests for validate_window() and parse_window_text()"""

    def test_valid_window(self):
        """Test a valid window is returned unchanged"""
        assert validate_window(-4, 4, 6) == (-4, 4, 6)

    def test_single_column_window(self):
        """Test n_lo == n_hi and m_max == 0 are allowed"""
        assert validate_window(0, 0, 0) == (0, 0, 0)

    def test_empty_x_range(self):
        """Test n_lo > n_hi raises WindowValidationError"""
        with pytest.raises(WindowValidationError, match="empty"):
            validate_window(2, 1, 3)

    def test_negative_m_max(self):
        """Test negative m_max raises WindowValidationError"""
        with pytest.raises(WindowValidationError, match="non-negative"):
            validate_window(0, 1, -1)

    def test_non_integer_bound(self):
        """Test non-integer bounds are rejected"""
        with pytest.raises(WindowValidationError):
            validate_window(0, 1.5, 2)
        with pytest.raises(WindowValidationError):
            validate_window(True, 1, 2)

    def test_parse_text(self):
        """Test nlo,nhi,mmax text with spaces"""
        assert parse_window_text(" -3, 4 ,5") == (-3, 4, 5)

    def test_parse_wrong_arity(self):
        """Test two or four parts are rejected"""
        with pytest.raises(WindowValidationError, match="nlo,nhi,mmax"):
            parse_window_text("1,2")
        with pytest.raises(WindowValidationError):
            parse_window_text("1,2,3,4")

    def test_parse_empty(self):
        """Test empty text is rejected"""
        with pytest.raises(WindowValidationError, match="empty"):
            parse_window_text("  ")

    def test_parse_not_integers(self):
        """Test non-integer parts are rejected"""
        with pytest.raises(WindowValidationError, match="integers"):
            parse_window_text("a,1,2")

    def test_index_range(self):
        """Test lo,hi index ranges"""
        assert parse_index_range("-16,16") == (-16, 16)
        with pytest.raises(WindowValidationError):
            parse_index_range("3,1")

# ============================================================================
# Depth and Level Validation Tests
# ============================================================================

@pytest.mark.unit
class TestDepthAndLevel:
    """Tests for validate_depth() and validate_level()"""

    def test_valid_depth(self):
        """Test depths from 1 to MAX_DEPTH"""
        assert validate_depth(1) == 1
        assert validate_depth(config.MAX_DEPTH) == config.MAX_DEPTH

    def test_depth_too_small(self):
        """Test depth 0 is rejected"""
        with pytest.raises(SequenceValidationError, match="at least 1"):
            validate_depth(0)

    def test_depth_too_large(self):
        """Test depths above MAX_DEPTH are rejected"""
        with pytest.raises(SequenceValidationError, match="too large"):
            validate_depth(config.MAX_DEPTH + 1)

    def test_level(self):
        """Test levels start at 1"""
        assert validate_level(3) == 3
        with pytest.raises(SequenceValidationError):
            validate_level(0)
        with pytest.raises(SequenceValidationError):
            validate_level("2")

# ============================================================================
# Scalar and Field Validation Tests
# ============================================================================

@pytest.mark.unit
class TestRationalAndField:
    """Tests for validate_rational_text(), validate_q_value() and validate_field_mode()"""

    def test_rational_literals(self):
        """Test p and p/r literals"""
        assert validate_rational_text("3") == 3
        assert validate_rational_text("-6/4") == Fraction(-3, 2)
        assert validate_rational_text(" 1 / 2 ") == Fraction(1, 2)
        assert validate_rational_text(7) == 7

    def test_rational_rejected(self):
        """Test malformed and zero-denominator literals"""
        with pytest.raises(ValidationError, match="Not a rational"):
            validate_rational_text("1.5")
        with pytest.raises(ValidationError, match="Zero denominator"):
            validate_rational_text("1/0")

    def test_q_values(self):
        """Test q = 1 is allowed while 0 and -1 are not"""
        assert validate_q_value("1") == 1
        assert validate_q_value(Fraction(2, 3)) == Fraction(2, 3)
        with pytest.raises(FieldConfigError, match="q = 0"):
            validate_q_value("0")
        with pytest.raises(FieldConfigError, match="q = -1"):
            validate_q_value("-2/2")
        with pytest.raises(FieldConfigError, match="Invalid q"):
            validate_q_value("two")

    def test_field_mode(self):
        """Test field modes are case-insensitive"""
        assert validate_field_mode(" Symbolic ") == "symbolic"
        assert validate_field_mode("numeric") == "numeric"
        with pytest.raises(FieldConfigError, match="Unknown field mode"):
            validate_field_mode("real")

# ============================================================================
# Suite Name Validation Tests
# ============================================================================

@pytest.mark.unit
class TestSuiteName:
    """Tests for validate_suite_name()"""

    def test_known_suites(self):
        """Test known suites and 'all'"""
        assert validate_suite_name("hopf-axioms") == "hopf-axioms"
        assert validate_suite_name("ALL") == "all"

    def test_unknown_suite(self):
        """Test unknown suites list the available names"""
        with pytest.raises(SuiteNameError, match="decompose-roundtrip"):
            validate_suite_name("hopf")
