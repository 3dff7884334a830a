"""
hq Ground Field and q-Combinatorics

This module contains the exact scalar layer including:
- GroundField: symbolic ℚ(q) or numeric ℚ with q fixed
- The active field (configured once, swappable in tests)
- Scalar JSON encoding
- q-integers, q-factorials, Gaussian binomials (memoized Pascal rows),
  q-falling factorials and iterated q-binomials
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterator, Optional, Union

from sympy import ZZ
from sympy.polys.fields import FracElement, field

# Import configuration
import config
from validators import (
    FieldConfigError,
    ValidationError,
    validate_field_mode,
    validate_q_value,
    validate_rational_text,
)

logger = logging.getLogger(__name__)

SYMBOLIC: str = "symbolic"
NUMERIC: str = "numeric"

# ℤ(q) is ℚ(q); sympy keeps elements cancelled and fraction_terms presents them with a monic denominator
Q_FIELD, Q = field("q", ZZ)

Scalar = Union[FracElement, Fraction]

# ============================================================================
# Ground Field
# ============================================================================

@dataclass(frozen=True)
class GroundField:
    """
    The ground field K.

    Symbolic mode works in ℚ(q) with q transcendental; numeric mode works in ℚ
    with q replaced by a fixed rational (0 and -1 rejected, 1 allowed).
    """
    mode: str = SYMBOLIC
    q_value: Optional[Fraction] = None

    def __post_init__(self) -> None:
        mode = validate_field_mode(self.mode)
        object.__setattr__(self, "mode", mode)

        if mode == NUMERIC:
            if self.q_value is None:
                raise FieldConfigError("Numeric mode needs a value for q")
            object.__setattr__(self, "q_value", validate_q_value(self.q_value))
        elif self.q_value is not None:
            raise FieldConfigError("Symbolic mode does not take a value for q")

    def __str__(self) -> str:
        if self.is_symbolic:
            return "Q(q)"
        return f"Q with q = {self.q_value}"

    @property
    def is_symbolic(self) -> bool:
        return self.mode == SYMBOLIC

    @property
    def zero(self) -> Scalar:
        return Q_FIELD.zero if self.is_symbolic else Fraction(0)

    @property
    def one(self) -> Scalar:
        return Q_FIELD.one if self.is_symbolic else Fraction(1)

    @property
    def q(self) -> Scalar:
        return Q if self.is_symbolic else self.q_value

    def scalar(self, value: Any) -> Scalar:
        """
        Coerce an int, Fraction, rational literal or field element into K.

        Raises:
            FieldConfigError: If a rational function is given in numeric mode
            ValidationError: If a string is not a rational literal
        """
        if isinstance(value, FracElement):
            if not self.is_symbolic:
                raise FieldConfigError("Rational functions in q need symbolic mode")
            return value

        if isinstance(value, str):
            value = validate_rational_text(value)

        value = Fraction(value)
        if self.is_symbolic:
            return Q_FIELD(value.numerator) / Q_FIELD(value.denominator)
        return value

    def q_power(self, k: int) -> Scalar:
        """q^k for any integer k."""
        return _q_power(self, k)

    def inverse(self, a: Scalar) -> Scalar:
        """
        Multiplicative inverse.

        Raises:
            ZeroDivisionError: If a is zero
        """
        if not a:
            raise ZeroDivisionError("Zero has no inverse in K")
        return self.one / a

    def to_json(self, a: Scalar) -> dict[str, Any]:
        """
        Encode a scalar as {"num": [...], "den": [...]} or {"rat": "p/r"}.

        Coefficient arrays run from q^0 upward, the denominator is monic, and a
        non-integer coefficient is written as a "p/r" string.
        """
        if self.is_symbolic:
            numerator, denominator = self.fraction_terms(a)
            return {"num": _coefficient_array(numerator), "den": _coefficient_array(denominator)}
        return {"rat": f"{a.numerator}/{a.denominator}"}

    def from_json(self, data: Any) -> Scalar:
        """
        Decode a scalar.

        Symbolic payloads are evaluated at q in numeric mode; rational payloads
        embed as constants in symbolic mode.

        Raises:
            ValidationError: If the payload is malformed or has a zero denominator
        """
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            return self.scalar(data)

        if not isinstance(data, dict):
            raise ValidationError(f"Scalar must be a JSON object, got {data!r}")

        if "rat" in data:
            return self.scalar(str(data["rat"]))

        if "num" in data and "den" in data:
            numerator = self._polynomial(data["num"])
            denominator = self._polynomial(data["den"])
            if not denominator:
                raise ValidationError("Scalar denominator evaluates to zero")
            return numerator / denominator

        raise ValidationError(f"Scalar needs 'rat' or 'num'/'den' keys, got {sorted(data)}")

    def _polynomial(self, coefficients: Any) -> Scalar:
        if not isinstance(coefficients, list) or not coefficients:
            raise ValidationError(f"Coefficient array must be a non-empty list, got {coefficients!r}")
        total = self.zero
        for k, c in enumerate(coefficients):
            if isinstance(c, bool) or not isinstance(c, (int, str)):
                raise ValidationError(f"Coefficients must be integers or \"p/r\" strings, got {c!r}")
            c = validate_rational_text(c)
            if c:
                total = total + self.scalar(c) * self.q_power(k)
        return total

    def fraction_terms(self, a: Scalar) -> tuple[list[tuple[int, Fraction]], list[tuple[int, Fraction]]]:
        """
        Split a scalar into numerator and denominator q-power terms, scaled so
        the denominator is monic.

        Returns:
            Tuple of (numerator terms, denominator terms), each a list of
            (q-exponent, rational coefficient) sorted by exponent
        """
        if not self.is_symbolic:
            return ([(0, a)] if a else []), [(0, Fraction(1))]
        numerator, denominator = _poly_terms(a.numer), _poly_terms(a.denom)
        lead = denominator[-1][1]
        return [(k, c / lead) for k, c in numerator], [(k, c / lead) for k, c in denominator]

    def laurent_terms(self, a: Scalar) -> Optional[list[tuple[int, Fraction]]]:
        """
        Expand a scalar as a Laurent polynomial in q.

        Returns:
            (q-exponent, coefficient) pairs sorted by exponent, or None when the
            denominator is not a monomial
        """
        numerator, denominator = self.fraction_terms(a)
        if len(denominator) != 1:
            return None
        shift, lead = denominator[0]
        return [(k - shift, c / lead) for k, c in numerator]

def _coefficient_array(terms: list[tuple[int, Fraction]]) -> list[Union[int, str]]:
    if not terms:
        return [0]
    coefficients: list[Union[int, str]] = [0] * (terms[-1][0] + 1)
    for k, c in terms:
        coefficients[k] = c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return coefficients

def _poly_terms(poly: Any) -> list[tuple[int, Fraction]]:
    return sorted((k, Fraction(int(c))) for (k,), c in poly.items())

@lru_cache(maxsize=8192)
def _q_power(field_: GroundField, k: int) -> Scalar:
    if k >= 0:
        return field_.q ** k
    return field_.one / field_.q ** (-k)

# ============================================================================
# Active Field
# ============================================================================

_active_field: Optional[GroundField] = None
_active_lock = threading.Lock()

def field_from_settings(mode: str, q_text: Optional[str] = None) -> GroundField:
    """
    Build a GroundField from configuration text.

    Args:
        mode: "symbolic" or "numeric"
        q_text: Rational literal for q (numeric mode only)

    Raises:
        FieldConfigError: If the mode or q value is invalid
    """
    mode = validate_field_mode(mode)
    if mode == NUMERIC:
        return GroundField(NUMERIC, validate_q_value(q_text))
    return GroundField(SYMBOLIC)

def get_field() -> GroundField:
    """Return the active ground field, configuring it from config on first use."""
    global _active_field
    current = _active_field
    if current is None:
        with _active_lock:
            if _active_field is None:
                _active_field = field_from_settings(config.FIELD_MODE, config.FIELD_Q)
                logger.info(f"Ground field configured from settings: {_active_field}")
            current = _active_field
    return current

def set_field(field_: GroundField) -> GroundField:
    """Make field_ the active ground field and return the previous one."""
    global _active_field
    with _active_lock:
        previous = _active_field
        _active_field = field_
    logger.debug(f"Active ground field set to {field_}")
    return previous if previous is not None else field_

def configure_field(mode: str, q_text: Optional[str] = None) -> GroundField:
    """Configure the active field from text settings and return it."""
    field_ = field_from_settings(mode, q_text)
    set_field(field_)
    return field_

@contextmanager
def using_field(field_: GroundField) -> Iterator[GroundField]:
    """Temporarily switch the active ground field."""
    global _active_field
    with _active_lock:
        previous = _active_field
        _active_field = field_
    try:
        yield field_
    finally:
        with _active_lock:
            _active_field = previous

def parse_scalar_text(text: str) -> Scalar:
    """Parse "p" or "p/r" into the active field."""
    return get_field().scalar(validate_rational_text(text))

# ============================================================================
# Gaussian Binomials
# ============================================================================

class PascalTable:
    """
    Rows of Gaussian binomials binom(n, i)_q for one ground field.

    Rows are appended by binom(n,i) = q^i binom(n-1,i) + binom(n-1,i-1) and
    never change once built.
    """

    def __init__(self, field_: GroundField):
        self.field = field_
        self._rows: list[list[Scalar]] = [[field_.one]]
        self._lock = threading.Lock()

    def row(self, n: int) -> list[Scalar]:
        if n < len(self._rows):
            return self._rows[n]

        with self._lock:
            while len(self._rows) <= n:
                previous = self._rows[-1]
                size = len(self._rows)
                row = [self.field.one]
                for i in range(1, size):
                    row.append(self.field.q_power(i) * previous[i] + previous[i - 1])
                row.append(self.field.one)
                self._rows.append(row)

        return self._rows[n]

_pascal_tables: dict[GroundField, PascalTable] = {}
_pascal_lock = threading.Lock()

def pascal_table(field_: Optional[GroundField] = None) -> PascalTable:
    """Shared Pascal table for a field (the active one by default)."""
    field_ = field_ or get_field()
    table = _pascal_tables.get(field_)
    if table is None:
        with _pascal_lock:
            table = _pascal_tables.setdefault(field_, PascalTable(field_))
    return table

# ============================================================================
# q-Combinatorics
# ============================================================================

def q_int(n: int) -> Scalar:
    """
    The q-integer (n)_q = 1 + q + ... + q^(n-1), with (0)_q = 0.

    Raises:
        ValidationError: If n is negative
    """
    if n < 0:
        raise ValidationError(f"q-integer needs n >= 0, got {n}")
    return _q_int(get_field(), n)

@lru_cache(maxsize=1024)
def _q_int(field_: GroundField, n: int) -> Scalar:
    total = field_.zero
    for i in range(n):
        total = total + field_.q_power(i)
    return total

def q_factorial(n: int) -> Scalar:
    """
    The q-factorial (n)!_q = (n)_q (n-1)_q ... (1)_q, with (0)!_q = 1.

    Raises:
        ValidationError: If n is negative
    """
    if n < 0:
        raise ValidationError(f"q-factorial needs n >= 0, got {n}")
    return _q_factorial(get_field(), n)

@lru_cache(maxsize=1024)
def _q_factorial(field_: GroundField, n: int) -> Scalar:
    product = field_.one
    for k in range(1, n + 1):
        product = product * _q_int(field_, k)
    return product

def q_binom(n: int, i: int) -> Scalar:
    """
    Gaussian binomial binom(n, i)_q, zero outside 0 <= i <= n.

    Raises:
        ValidationError: If n is negative
    """
    if n < 0:
        raise ValidationError(f"Gaussian binomial needs n >= 0, got {n}")
    field_ = get_field()
    if i < 0 or i > n:
        return field_.zero
    return pascal_table(field_).row(n)[i]

def q_falling(n: int, m: int) -> Scalar:
    """
    The q-falling factorial (n, m)_q = (n)_q (n-1)_q ... (n-m+1)_q.

    Raises:
        ValidationError: Unless 0 < m <= n
    """
    if m <= 0 or m > n:
        raise ValidationError(f"q-falling factorial needs 0 < m <= n, got n={n}, m={m}")
    field_ = get_field()
    product = field_.one
    for k in range(n - m + 1, n + 1):
        product = product * _q_int(field_, k)
    return product

def q_multi_binom(m: int, t: int, l: int) -> Scalar:
    """
    Iterated Gaussian binomial binom(m, t)_{q,l} = prod_{i<l} binom(m - i t, t)_q.

    Raises:
        ValidationError: Unless 1 <= t <= m and 1 <= l <= m / t
    """
    if t < 1 or t > m or l < 1 or l * t > m:
        raise ValidationError(
            f"Iterated binomial needs 1 <= t <= m and 1 <= l <= m/t, got m={m}, t={t}, l={l}"
        )
    field_ = get_field()
    product = field_.one
    for i in range(l):
        product = product * q_binom(m - i * t, t)
    return product
