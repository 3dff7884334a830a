"""
hq Element Expressions

This module contains the text surface for elements of H:
- Tokenizer and recursive-descent parser for normal-form sums
- ExprAst, the parsed sum of terms
- Rendering of scalars, elements and tensors

Grammar (whitespace insignificant):

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor ('*' factor)* ['/' '(' qpoly ')']
    factor := rational | 'q' ['^' int] | 'x' ['^' int] | 'y' ['^' nat]

Factors appear at most once each, in the order rational, q, x, y.
qpoly is a sum of terms built from rationals and non-negative powers of q.
The minus sign U+2212 is accepted wherever "-" is.
"""

import re
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from constants import TENSOR_SEPARATOR, ZERO_TEXT
from halgebra import Element, TensorElement
from qscalar import Scalar, get_field
from validators import ExpressionSyntaxError

logger = logging.getLogger(__name__)

QPoly = tuple[tuple[int, Fraction], ...]

# ============================================================================
# AST
# ============================================================================

@dataclass(frozen=True)
class Term:
    """coefficient · q^q_exp · x^x_exp · y^y_exp / denominator(q)."""
    coefficient: Fraction
    q_exp: int = 0
    x_exp: int = 0
    y_exp: int = 0
    denominator: Optional[QPoly] = None

@dataclass(frozen=True)
class ExprAst:
    terms: tuple[Term, ...]

# ============================================================================
# Tokenizer
# ============================================================================

_TOKEN_PATTERN = re.compile(r'\s*(?:(\d+)|([qxy])|([-+*/^()\u2212]))')

# U+2212 MINUS SIGN reads as "-"
_MINUS_SIGN = "\u2212"

@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int

def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_PATTERN.match(text, position)
        if not match:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise ExpressionSyntaxError(f"Unexpected character {text[offset]!r}", text, offset)
        number, name, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(_Token("number", number, start))
        elif name is not None:
            tokens.append(_Token("name", name, start))
        else:
            tokens.append(_Token("op", "-" if op == _MINUS_SIGN else op, start))
        position = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens

# ============================================================================
# Parser
# ============================================================================

_FACTOR_RANK = {"rational": 0, "q": 1, "x": 2, "y": 3}

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Optional[_Token] = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, self.text, token.position)

    def advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def accept(self, op: str) -> bool:
        if self.current.kind == "op" and self.current.text == op:
            self.index += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            raise self.error(f"Expected {op!r}")

    def peek_op(self, offset: int = 0) -> str:
        token = self.tokens[min(self.index + offset, len(self.tokens) - 1)]
        return token.text if token.kind == "op" else ""

    def parse_expression(self) -> ExprAst:
        if self.current.kind == "end":
            raise self.error("Empty expression")
        terms = [self.parse_signed_term()]
        while self.current.kind == "op" and self.current.text in "+-":
            terms.append(self.parse_signed_term())
        if self.current.kind != "end":
            raise self.error(f"Unexpected {self.current.text!r}")
        return ExprAst(tuple(terms))

    def parse_signed_term(self) -> Term:
        sign = -1 if self.peek_op() == "-" else 1
        if self.peek_op() in ("+", "-"):
            self.advance()
        term = self.parse_term()
        if sign < 0:
            return Term(-term.coefficient, term.q_exp, term.x_exp, term.y_exp, term.denominator)
        return term

    def parse_term(self) -> Term:
        values = {"rational": Fraction(1), "q": 0, "x": 0, "y": 0}
        last_rank = -1
        while True:
            token = self.current
            kind, value = self.parse_factor()
            rank = _FACTOR_RANK[kind]
            if rank <= last_rank:
                raise self.error("Factors must appear once each in the order rational, q, x, y", token)
            last_rank = rank
            values[kind] = value
            if self.peek_op() == "*":
                self.advance()
                continue
            break

        denominator = None
        if self.peek_op() == "/" and self.peek_op(1) == "(":
            self.advance()
            self.advance()
            denominator = self.parse_qpoly()
            self.expect(")")

        return Term(values["rational"], values["q"], values["x"], values["y"], denominator)

    def parse_factor(self) -> tuple[str, object]:
        token = self.current
        if token.kind == "number":
            return "rational", self.parse_rational()
        if token.kind == "name":
            self.advance()
            exponent = 1
            if self.accept("^"):
                exponent_token = self.current
                exponent = self.parse_int()
                if token.text == "y" and exponent < 0:
                    raise self.error("y-exponent must be non-negative", exponent_token)
            return token.text, exponent
        raise self.error("Expected a number, q, x or y")

    def parse_rational(self) -> Fraction:
        numerator = int(self.advance().text)
        if self.peek_op() == "/" and self.tokens[self.index + 1].kind == "number":
            self.advance()
            token = self.advance()
            denominator = int(token.text)
            if denominator == 0:
                raise self.error("Zero denominator", token)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def parse_int(self) -> int:
        sign = 1
        if self.peek_op() in ("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        if self.current.kind != "number":
            raise self.error("Expected an integer exponent")
        return sign * int(self.advance().text)

    def parse_qpoly(self) -> QPoly:
        start = self.current
        total: dict[int, Fraction] = {}
        first = True
        while first or (self.current.kind == "op" and self.current.text in "+-"):
            first = False
            sign = -1 if self.peek_op() == "-" else 1
            if self.peek_op() in ("+", "-"):
                self.advance()
            coefficient, exponent = Fraction(1), 0
            last_rank = -1
            while True:
                token = self.current
                kind, value = self.parse_factor()
                if kind not in ("rational", "q"):
                    raise self.error("Denominators may only contain rationals and powers of q", token)
                rank = _FACTOR_RANK[kind]
                if rank <= last_rank:
                    raise self.error("Factors must appear once each in the order rational, q", token)
                if kind == "q" and value < 0:
                    raise self.error("Denominator q-exponents must be non-negative", token)
                last_rank = rank
                if kind == "rational":
                    coefficient = value
                else:
                    exponent = value
                if not self.accept("*"):
                    break
            total[exponent] = total.get(exponent, Fraction(0)) + sign * coefficient
        poly = tuple(sorted((k, c) for k, c in total.items() if c))
        if not poly:
            raise self.error("Denominator is zero", start)
        return poly

def parse_expression(text: str) -> ExprAst:
    """
    Parse text into an ExprAst.

    Raises:
        ExpressionSyntaxError: With the offending position
    """
    return _Parser(text).parse_expression()

def _qpoly_value(poly: QPoly) -> Scalar:
    field_ = get_field()
    total = field_.zero
    for k, c in poly:
        total = total + field_.scalar(c) * field_.q_power(k)
    return total

def evaluate(ast: ExprAst) -> Element:
    """
    Normalize an ExprAst into an Element of the active field.

    Raises:
        ExpressionSyntaxError: If a denominator vanishes at the configured q
    """
    field_ = get_field()
    terms: dict[tuple[int, int], Scalar] = {}
    for term in ast.terms:
        c = field_.scalar(term.coefficient) * field_.q_power(term.q_exp)
        if term.denominator is not None:
            d = _qpoly_value(term.denominator)
            if not d:
                raise ExpressionSyntaxError("Denominator vanishes at the configured q", "", 0)
            c = c / d
        key = (term.x_exp, term.y_exp)
        terms[key] = terms[key] + c if key in terms else c
    return Element(terms)

def parse_element(text: str) -> Element:
    """Parse and normalize an element of H."""
    element = evaluate(parse_expression(text))
    logger.debug(f"Parsed {text!r} into {len(element)} terms")
    return element

# ============================================================================
# Rendering
# ============================================================================

def _power(name: str, exponent: int) -> Optional[str]:
    if exponent == 0:
        return None
    return name if exponent == 1 else f"{name}^{exponent}"

def _rational_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

def _qpoly_text(poly: list[tuple[int, Fraction]]) -> str:
    return _join_signed([(c, [_power("q", k)]) for k, c in poly])

def _factor_text(c: Fraction, factors: list[Optional[str]]) -> tuple[int, str]:
    # returns sign and the unsigned product text
    present = [f for f in factors if f]
    magnitude = abs(c)
    if magnitude != 1 or not present:
        present.insert(0, _rational_text(magnitude))
    return (-1 if c < 0 else 1), "*".join(present)

def _join_signed(items: list[tuple[Fraction, list[Optional[str]]]], suffixes: Optional[list[str]] = None) -> str:
    parts: list[str] = []
    for index, (c, factors) in enumerate(items):
        sign, body = _factor_text(c, factors)
        if suffixes:
            body += suffixes[index]
        if index == 0:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if sign > 0 else f" - {body}")
    return "".join(parts) if parts else ZERO_TEXT

def _coefficient_items(c: Scalar, factors: list[Optional[str]]) -> tuple[list[tuple[Fraction, list[Optional[str]]]], str]:
    """Split c·factors into signed rational terms plus a shared denominator suffix."""
    field_ = get_field()
    laurent = field_.laurent_terms(c)
    if laurent is not None:
        return [(k_c, [_power("q", k)] + factors) for k, k_c in laurent], ""
    numerator, denominator = field_.fraction_terms(c)
    return [(k_c, [_power("q", k)] + factors) for k, k_c in numerator], f"/({_qpoly_text(denominator)})"

def render_element(a: Element) -> str:
    """
    Deterministic text for an element, terms sorted by (n, m) and then by q-power.
    parse_element(render_element(a)) == a.
    """
    items: list[tuple[Fraction, list[Optional[str]]]] = []
    suffixes: list[str] = []
    for (n, m), c in a.items():
        pieces, suffix = _coefficient_items(c, [_power("x", n), _power("y", m)])
        items.extend(pieces)
        suffixes.extend([suffix] * len(pieces))
    return _join_signed(items, suffixes)

def render_scalar(c: Scalar) -> str:
    """Text for a scalar, as a Laurent polynomial in q where possible."""
    items, suffix = _coefficient_items(c, [])
    if not items:
        return ZERO_TEXT
    return _join_signed(items, [suffix] * len(items))

def render_monomial(n: int, m: int) -> str:
    return "*".join(p for p in (_power("x", n), _power("y", m)) if p) or "1"

def render_tensor(t: TensorElement) -> str:
    """
    Text for a tensor: summands c*left (x) right, with the coefficient on the left
    leg and parenthesized when it has more than one term.
    """
    parts: list[str] = []
    for (left, right), c in t.items():
        scalar = render_scalar(c)
        negative = scalar.startswith("-") and " " not in scalar
        if negative:
            scalar = scalar[1:]
        left_text = render_monomial(*left)
        if scalar == "1":
            body = left_text
        else:
            wrapped = f"({scalar})" if " " in scalar or "/(" in scalar else scalar
            body = wrapped if left_text == "1" else f"{wrapped}*{left_text}"
        body = f"{body}{TENSOR_SEPARATOR}{render_monomial(*right)}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) if parts else ZERO_TEXT

def render_ast(ast: ExprAst) -> str:
    """Text for a parsed expression; parsing it again gives the same ExprAst."""
    items = [(t.coefficient, [_power("q", t.q_exp), _power("x", t.x_exp), _power("y", t.y_exp)]) for t in ast.terms]
    suffixes = [f"/({_qpoly_text(list(t.denominator))})" if t.denominator else "" for t in ast.terms]
    return _join_signed(items, suffixes)
