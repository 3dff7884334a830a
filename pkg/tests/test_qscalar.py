"""
Unit tests for qscalar.py

Tests for the ground field, scalar JSON and q-combinatorics.
"""

import pytest
from fractions import Fraction
from math import comb

from qscalar import (
    NUMERIC,
    SYMBOLIC,
    Q,
    GroundField,
    configure_field,
    get_field,
    parse_scalar_text,
    pascal_table,
    q_binom,
    q_factorial,
    q_falling,
    q_int,
    q_multi_binom,
    using_field,
)
from validators import FieldConfigError, ValidationError

# ============================================================================
# Ground Field Tests
# ============================================================================

@pytest.mark.unit
class TestGroundField:
    """Tests for GroundField"""

    def test_symbolic_constants(self):
        """Test zero, one and q in symbolic mode"""
        field_ = GroundField(SYMBOLIC)
        assert not field_.zero
        assert field_.one == 1
        assert field_.q == Q

    def test_numeric_constants(self):
        """Test q is the configured rational in numeric mode"""
        field_ = GroundField(NUMERIC, Fraction(3, 2))
        assert field_.q == Fraction(3, 2)
        assert field_.one == Fraction(1)

    def test_numeric_q_zero_rejected(self):
        """Test q = 0 is rejected"""
        with pytest.raises(FieldConfigError, match="q = 0"):
            GroundField(NUMERIC, 0)

    def test_numeric_q_minus_one_rejected(self):
        """Test q = -1 is rejected"""
        with pytest.raises(FieldConfigError, match="q = -1"):
            GroundField(NUMERIC, -1)

    def test_numeric_q_one_allowed(self):
        """Test q = 1 is a valid classical limit"""
        assert GroundField(NUMERIC, 1).q == 1

    def test_numeric_without_q_rejected(self):
        """Test numeric mode needs a q value"""
        with pytest.raises(FieldConfigError, match="needs a value"):
            GroundField(NUMERIC)

    def test_symbolic_with_q_rejected(self):
        """Test symbolic mode refuses a q value"""
        with pytest.raises(FieldConfigError):
            GroundField(SYMBOLIC, Fraction(2))

    def test_unknown_mode_rejected(self):
        """Test unknown mode names raise FieldConfigError"""
        with pytest.raises(FieldConfigError, match="Unknown field mode"):
            GroundField("padic")

    def test_negative_q_powers(self):
        """Test q^-k is the inverse of q^k"""
        field_ = GroundField(SYMBOLIC)
        assert field_.q_power(-3) * field_.q_power(3) == 1
        assert GroundField(NUMERIC, 2).q_power(-2) == Fraction(1, 4)

    def test_inverse_of_zero_raises(self):
        """Test inverse(0) raises ZeroDivisionError"""
        with pytest.raises(ZeroDivisionError):
            GroundField(SYMBOLIC).inverse(GroundField(SYMBOLIC).zero)

    def test_rational_function_rejected_in_numeric_mode(self):
        """Test a symbolic scalar cannot be coerced into numeric mode"""
        with pytest.raises(FieldConfigError):
            GroundField(NUMERIC, 2).scalar(Q)

    def test_normal_form_is_canonical(self):
        """Test equal rational functions compare equal after cancellation"""
        assert (Q * Q - 1) / (Q - 1) == Q + 1
        assert (2 * Q) / (4 * Q * Q) == 1 / (2 * Q)

# ============================================================================
# Scalar JSON Tests
# ============================================================================

@pytest.mark.unit
class TestScalarJson:
    """Tests for GroundField.to_json() and from_json()"""

    def test_symbolic_encoding(self):
        """Test coefficient arrays are ascending in q"""
        field_ = GroundField(SYMBOLIC)
        assert field_.to_json(1 + Q) == {"num": [1, 1], "den": [1]}
        assert field_.to_json(field_.q_power(-1)) == {"num": [1], "den": [0, 1]}
        assert field_.to_json(field_.zero) == {"num": [0], "den": [1]}

    def test_monic_denominator(self):
        """Test the encoded denominator is monic, with p/r numerator coefficients"""
        field_ = GroundField(SYMBOLIC)
        assert field_.to_json(1 / (2 + 2 * Q)) == {"num": ["1/2"], "den": [1, 1]}
        assert field_.to_json(Q / (3 * Q ** 2 + 1)) == {"num": [0, "1/3"], "den": ["1/3", 0, 1]}

    def test_fraction_terms_monic(self):
        """Test fraction_terms divides through by the denominator's leading coefficient"""
        numerator, denominator = GroundField(SYMBOLIC).fraction_terms(1 / (2 + 2 * Q))
        assert numerator == [(0, Fraction(1, 2))]
        assert denominator == [(0, Fraction(1)), (1, Fraction(1))]

    def test_rational_coefficients_decoded(self):
        """Test p/r strings inside coefficient arrays"""
        field_ = GroundField(SYMBOLIC)
        assert field_.from_json({"num": ["1/2"], "den": [1, 1]}) == 1 / (2 + 2 * Q)
        with pytest.raises(ValidationError):
            field_.from_json({"num": [1.5], "den": [1]})

    def test_symbolic_decoding(self):
        """Test num/den payloads decode to the rational function"""
        field_ = GroundField(SYMBOLIC)
        assert field_.from_json({"num": [0, 2], "den": [1, 1]}) == 2 * Q / (1 + Q)

    def test_numeric_encoding(self):
        """Test numeric scalars encode as p/r text"""
        field_ = GroundField(NUMERIC, 2)
        assert field_.to_json(Fraction(-3, 2)) == {"rat": "-3/2"}

    def test_symbolic_payload_evaluated_in_numeric_mode(self):
        """Test rational functions are evaluated at the configured q"""
        field_ = GroundField(NUMERIC, 2)
        assert field_.from_json({"num": [1, 1], "den": [1]}) == 3

    def test_plain_literals_accepted(self):
        """Test integers and p/r strings decode directly"""
        field_ = GroundField(SYMBOLIC)
        assert field_.from_json(3) == 3
        assert field_.from_json("1/2") == field_.scalar(Fraction(1, 2))

    def test_zero_denominator_rejected(self):
        """Test a zero denominator array raises ValidationError"""
        with pytest.raises(ValidationError, match="zero"):
            GroundField(SYMBOLIC).from_json({"num": [1], "den": [0]})

    def test_malformed_payload_rejected(self):
        """Test payloads without rat or num/den raise ValidationError"""
        with pytest.raises(ValidationError):
            GroundField(SYMBOLIC).from_json({"value": 1})

    def test_laurent_terms(self):
        """Test Laurent expansion of monomial-denominator scalars"""
        field_ = GroundField(SYMBOLIC)
        assert field_.laurent_terms((1 + Q) / (2 * Q)) == [(-1, Fraction(1, 2)), (0, Fraction(1, 2))]
        assert field_.laurent_terms(1 / (1 + Q)) is None

# ============================================================================
# Active Field Tests
# ============================================================================

@pytest.mark.unit
class TestActiveField:
    """Tests for get_field(), configure_field() and using_field()"""

    def test_using_field_restores(self):
        """Test the previous field is restored on exit"""
        before = get_field()
        with using_field(GroundField(NUMERIC, 2)):
            assert get_field().q == 2
        assert get_field() == before

    def test_configure_field_from_text(self):
        """Test configure_field parses the q literal"""
        configure_field("numeric", "3/2")
        assert get_field().q == Fraction(3, 2)

    def test_parse_scalar_text(self):
        """Test p/r literals become field scalars"""
        assert parse_scalar_text("-4/6") == get_field().scalar(Fraction(-2, 3))

# ============================================================================
# q-Combinatorics Tests
# ============================================================================

@pytest.mark.unit
class TestQCombinatorics:
    """Tests for q_int, q_factorial, q_binom, q_falling and q_multi_binom"""

    def test_q_int(self):
        """Test (n)_q values"""
        assert not q_int(0)
        assert q_int(1) == 1
        assert q_int(3) == 1 + Q + Q ** 2

    def test_q_factorial(self):
        """Test (n)!_q values"""
        assert q_factorial(0) == 1
        assert q_factorial(3) == (1 + Q) * (1 + Q + Q ** 2)

    def test_q_binom_small(self):
        """Test known Gaussian binomials"""
        assert q_binom(2, 1) == 1 + Q
        assert q_binom(4, 2) == 1 + Q + 2 * Q ** 2 + Q ** 3 + Q ** 4

    def test_q_binom_outside_range_is_zero(self):
        """Test binom(n, i) = 0 for i < 0 or i > n"""
        assert not q_binom(3, -1)
        assert not q_binom(3, 4)

    def test_q_binom_negative_n_rejected(self):
        """Test n < 0 raises ValidationError"""
        with pytest.raises(ValidationError):
            q_binom(-1, 0)

    def test_pascal_matches_factorial_quotient(self):
        """Test the Pascal rows equal (n)!/((i)!(n-i)!) for n <= 12"""
        for n in range(13):
            for i in range(n + 1):
                assert q_binom(n, i) == q_factorial(n) / (q_factorial(i) * q_factorial(n - i))

    def test_q_binom_at_q_one_is_binomial(self):
        """Test q = 1 recovers integer binomials"""
        with using_field(GroundField(NUMERIC, 1)):
            for n in range(13):
                assert [q_binom(n, i) for i in range(n + 1)] == [comb(n, i) for i in range(n + 1)]

    def test_pascal_rows_are_shared(self):
        """Test the table for a field is built once"""
        assert pascal_table() is pascal_table(get_field())

    def test_q_falling(self):
        """Test (n, m)_q = (n)_q ... (n-m+1)_q"""
        assert q_falling(3, 2) == q_int(3) * q_int(2)
        assert q_falling(4, 4) == q_factorial(4)

    def test_q_falling_range(self):
        """Test m outside 0 < m <= n is rejected"""
        with pytest.raises(ValidationError):
            q_falling(2, 0)
        with pytest.raises(ValidationError):
            q_falling(2, 3)

    def test_q_multi_binom(self):
        """Test iterated binomials are products of binomials"""
        assert q_multi_binom(4, 2, 1) == q_binom(4, 2)
        assert q_multi_binom(5, 1, 3) == q_falling(5, 3)
        assert q_multi_binom(6, 2, 3) == q_binom(6, 2) * q_binom(4, 2)

    def test_q_multi_binom_range(self):
        """Test l * t > m is rejected"""
        with pytest.raises(ValidationError):
            q_multi_binom(4, 2, 3)
