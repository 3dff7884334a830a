"""
hq Hopf Algebra H = k_q[x, x^-1, y]

This module contains the algebra H itself:
- Element and TensorElement in normal form on the basis {x^n y^m}
- Product via (x^a y^b)(x^c y^d) = q^(bc) x^(a+c) y^(b+d)
- Coproduct, counit and antipode
- Grading helpers and grouplike / skew-primitive tests
- Window, the finite frame every sweep runs on
- The exact primitive-space solver
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Iterable, Iterator, Mapping, Optional

from sympy.polys.fields import FracElement

from qscalar import GroundField, Scalar, get_field, q_binom
from utils import nullspace
from validators import ValidationError, WindowValidationError, parse_window_text, validate_window

logger = logging.getLogger(__name__)

Monomial = tuple[int, int]
Pair = tuple[Monomial, Monomial]
Triple = tuple[Monomial, Monomial, Monomial]

# ============================================================================
# Elements
# ============================================================================

def _coerce(field_: GroundField, c: Any) -> Scalar:
    if field_.is_symbolic:
        return c if isinstance(c, FracElement) else field_.scalar(c)
    return c if isinstance(c, Fraction) else field_.scalar(c)

def _check_monomial(key: Any) -> Monomial:
    try:
        n, m = key
    except (TypeError, ValueError):
        raise ValidationError(f"Basis index must be a pair (n, m), got {key!r}")
    if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, int) or not isinstance(m, int):
        raise ValidationError(f"Basis exponents must be integers, got {key!r}")
    if m < 0:
        raise ValidationError(f"y-exponent must be non-negative, got {m}")
    return n, m

class Element:
    """
    A finitely supported linear combination of basis monomials x^n y^m.

    Zero coefficients are never stored, so equality is map equality.
    Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Any]] = None):
        field_ = get_field()
        cleaned: dict[Monomial, Scalar] = {}
        for key, c in (terms or {}).items():
            key = _check_monomial(key)
            c = _coerce(field_, c)
            if c:
                cleaned[key] = c
        self._terms = cleaned

    @classmethod
    def _raw(cls, terms: dict[Monomial, Scalar]) -> "Element":
        element = cls.__new__(cls)
        element._terms = terms
        return element

    @classmethod
    def zero(cls) -> "Element":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Element":
        return cls._raw({(0, 0): get_field().one})

    @classmethod
    def monomial(cls, n: int, m: int, c: Any = None) -> "Element":
        """The term c x^n y^m (c defaults to 1)."""
        field_ = get_field()
        _check_monomial((n, m))
        c = field_.one if c is None else _coerce(field_, c)
        return cls._raw({(n, m): c} if c else {})

    @classmethod
    def constant(cls, c: Any) -> "Element":
        return cls.monomial(0, 0, c)

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Monomial, Scalar]]:
        """Terms sorted by (n, m)."""
        return sorted(self._terms.items())

    def coefficient(self, n: int, m: int) -> Scalar:
        return self._terms.get((n, m), get_field().zero)

    @property
    def support(self) -> frozenset[Monomial]:
        return frozenset(self._terms)

    @property
    def y_degree(self) -> int:
        """Largest y-exponent, or -1 for zero."""
        return max((m for _, m in self._terms), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._terms))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Element):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return Element._raw(_combine(self._terms, other._terms, 1))

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return Element._raw(_combine(self._terms, other._terms, -1))

    def __neg__(self) -> "Element":
        return Element._raw({k: -c for k, c in self._terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return multiply(self, other)

    def scale(self, c: Any) -> "Element":
        """Multiply every coefficient by the scalar c."""
        c = _coerce(get_field(), c)
        if not c:
            return Element.zero()
        return Element._raw({k: v * c for k, v in self._terms.items()})

    def __repr__(self) -> str:
        body = ", ".join(f"({n}, {m}): {c}" for (n, m), c in self.items())
        return f"Element({{{body}}})"

    def to_json(self) -> dict[str, Any]:
        field_ = get_field()
        return {"terms": [{"n": n, "m": m, "c": field_.to_json(c)} for (n, m), c in self.items()]}

    @classmethod
    def from_json(cls, data: Any) -> "Element":
        """
        Decode {"terms": [{"n": int, "m": int, "c": Scalar}]}.

        Raises:
            ValidationError: If the payload is malformed
        """
        if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
            raise ValidationError("Element JSON must be an object with a 'terms' list")
        field_ = get_field()
        total: dict[Monomial, Scalar] = {}
        for term in data["terms"]:
            try:
                key = _check_monomial((term["n"], term["m"]))
                c = field_.from_json(term["c"])
            except (KeyError, TypeError):
                raise ValidationError(f"Element term needs n, m and c, got {term!r}")
            _accumulate(total, key, c)
        return cls._raw(total)

def _accumulate(target: dict, key: Any, c: Scalar) -> None:
    value = target.get(key)
    value = c if value is None else value + c
    if value:
        target[key] = value
    else:
        target.pop(key, None)

def _combine(left: Mapping, right: Mapping, sign: int) -> dict:
    result = dict(left)
    for key, c in right.items():
        _accumulate(result, key, c if sign > 0 else -c)
    return result

def element_sum(elements: Iterable[Element]) -> Element:
    """Sum of a sequence of elements."""
    total: dict[Monomial, Scalar] = {}
    for element in elements:
        for key, c in element._terms.items():
            _accumulate(total, key, c)
    return Element._raw(total)

# ============================================================================
# Tensor Elements
# ============================================================================

class TensorElement:
    """
    A finitely supported combination of basis pairs x^a y^b ⊗ x^c y^d.

    The product is componentwise: (a⊗b)(c⊗d) = ac⊗bd.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Pair, Any]] = None):
        field_ = get_field()
        cleaned: dict[Pair, Scalar] = {}
        for key, c in (terms or {}).items():
            try:
                left, right = key
            except (TypeError, ValueError):
                raise ValidationError(f"Tensor index must be a pair of monomials, got {key!r}")
            key = (_check_monomial(left), _check_monomial(right))
            c = _coerce(field_, c)
            if c:
                cleaned[key] = c
        self._terms = cleaned

    @classmethod
    def _raw(cls, terms: dict[Pair, Scalar]) -> "TensorElement":
        tensor = cls.__new__(cls)
        tensor._terms = terms
        return tensor

    @classmethod
    def zero(cls) -> "TensorElement":
        return cls._raw({})

    @classmethod
    def from_pair(cls, a: Element, b: Element) -> "TensorElement":
        """The tensor a ⊗ b."""
        terms: dict[Pair, Scalar] = {}
        for left, c in a._terms.items():
            for right, d in b._terms.items():
                terms[(left, right)] = c * d
        return cls._raw(terms)

    @property
    def terms(self) -> Mapping[Pair, Scalar]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Pair, Scalar]]:
        return sorted(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TensorElement):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        return TensorElement._raw(_combine(self._terms, other._terms, 1))

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        return TensorElement._raw(_combine(self._terms, other._terms, -1))

    def __neg__(self) -> "TensorElement":
        return TensorElement._raw({k: -c for k, c in self._terms.items()})

    def scale(self, c: Any) -> "TensorElement":
        c = _coerce(get_field(), c)
        if not c:
            return TensorElement.zero()
        return TensorElement._raw({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        field_ = get_field()
        terms: dict[Pair, Scalar] = {}
        for (l1, r1), c in self._terms.items():
            for (l2, r2), d in other._terms.items():
                e_left, left = _monomial_product(l1, l2)
                e_right, right = _monomial_product(r1, r2)
                _accumulate(terms, (left, right), c * d * field_.q_power(e_left + e_right))
        return TensorElement._raw(terms)

    def map_legs(self, left: Callable[[int, int], Element], right: Callable[[int, int], Element]) -> "TensorElement":
        """(f ⊗ g) applied to this tensor, with f and g given on basis monomials."""
        terms: dict[Pair, Scalar] = {}
        left_images: dict[Monomial, Element] = {}
        right_images: dict[Monomial, Element] = {}
        for (l, r), c in self._terms.items():
            if l not in left_images:
                left_images[l] = left(*l)
            if r not in right_images:
                right_images[r] = right(*r)
            for lk, lc in left_images[l]._terms.items():
                for rk, rc in right_images[r]._terms.items():
                    _accumulate(terms, (lk, rk), c * lc * rc)
        return TensorElement._raw(terms)

    def left_counit(self) -> Element:
        """(ε ⊗ id) followed by k ⊗ H ≅ H."""
        total: dict[Monomial, Scalar] = {}
        for ((_, m), right), c in self._terms.items():
            if m == 0:
                _accumulate(total, right, c)
        return Element._raw(total)

    def right_counit(self) -> Element:
        """(id ⊗ ε) followed by H ⊗ k ≅ H."""
        total: dict[Monomial, Scalar] = {}
        for (left, (_, m)), c in self._terms.items():
            if m == 0:
                _accumulate(total, left, c)
        return Element._raw(total)

    def multiply_legs(self) -> Element:
        """The multiplication map m(a ⊗ b) = ab."""
        field_ = get_field()
        total: dict[Monomial, Scalar] = {}
        for (left, right), c in self._terms.items():
            exponent, key = _monomial_product(left, right)
            _accumulate(total, key, c * field_.q_power(exponent))
        return Element._raw(total)

    def __repr__(self) -> str:
        body = ", ".join(f"({l}, {r}): {c}" for (l, r), c in self.items())
        return f"TensorElement({{{body}}})"

    def to_json(self) -> dict[str, Any]:
        field_ = get_field()
        return {"terms": [
            {"left": {"n": l[0], "m": l[1]}, "right": {"n": r[0], "m": r[1]}, "c": field_.to_json(c)}
            for (l, r), c in self.items()
        ]}

    @classmethod
    def from_json(cls, data: Any) -> "TensorElement":
        if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
            raise ValidationError("TensorElement JSON must be an object with a 'terms' list")
        field_ = get_field()
        total: dict[Pair, Scalar] = {}
        for term in data["terms"]:
            try:
                left = _check_monomial((term["left"]["n"], term["left"]["m"]))
                right = _check_monomial((term["right"]["n"], term["right"]["m"]))
                c = field_.from_json(term["c"])
            except (KeyError, TypeError):
                raise ValidationError(f"Tensor term needs left, right and c, got {term!r}")
            _accumulate(total, (left, right), c)
        return cls._raw(total)

# ============================================================================
# Product
# ============================================================================

def _monomial_product(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    # y^m x^c = q^(mc) x^c y^m, so only the middle swap contributes
    (n1, m1), (n2, m2) = a, b
    return m1 * n2, (n1 + n2, m1 + m2)

def multiply(a: Element, b: Element) -> Element:
    """
    Product in H.

    Args:
        a: Left factor
        b: Right factor

    Returns:
        The normal form of ab
    """
    field_ = get_field()
    total: dict[Monomial, Scalar] = {}
    for left, c in a._terms.items():
        for right, d in b._terms.items():
            exponent, key = _monomial_product(left, right)
            _accumulate(total, key, c * d * field_.q_power(exponent))
    return Element._raw(total)

def power(a: Element, k: int) -> Element:
    """a^k for k >= 0."""
    if k < 0:
        raise ValidationError(f"Only non-negative powers are defined for general elements, got {k}")
    result = Element.one()
    for _ in range(k):
        result = multiply(result, a)
    return result

# ============================================================================
# Coproduct, Counit, Antipode
# ============================================================================

@lru_cache(maxsize=4096)
def _coproduct_monomial(field_: GroundField, n: int, m: int) -> dict[Pair, Scalar]:
    terms: dict[Pair, Scalar] = {}
    for i in range(m + 1):
        terms[((n, i), (n + i, m - i))] = q_binom(m, i)
    return terms

def comultiply(a: Element) -> TensorElement:
    """
    Coproduct, Δ(x^n y^m) = Σ_i binom(m,i)_q x^n y^i ⊗ x^(n+i) y^(m-i).
    """
    field_ = get_field()
    total: dict[Pair, Scalar] = {}
    for (n, m), c in a._terms.items():
        for key, b in _coproduct_monomial(field_, n, m).items():
            _accumulate(total, key, c * b)
    return TensorElement._raw(total)

def comultiply_monomial(n: int, m: int) -> TensorElement:
    return TensorElement._raw(dict(_coproduct_monomial(get_field(), n, m)))

def counit(a: Element) -> Scalar:
    """ε(x^n y^m) = 1 if m = 0 else 0, extended linearly."""
    total = get_field().zero
    for (_, m), c in a._terms.items():
        if m == 0:
            total = total + c
    return total

def antipode_monomial(n: int, m: int) -> Element:
    # S(x^n y^m) = S(y)^m S(x)^n = (-1)^m q^(-m(m+1)/2 - mn) x^(-n-m) y^m
    field_ = get_field()
    sign = -1 if m % 2 else 1
    c = field_.q_power(-(m * (m + 1)) // 2 - m * n)
    return Element._raw({(-n - m, m): c if sign > 0 else -c})

def antipode(a: Element) -> Element:
    """Antipode, via the monomial closed form."""
    total: dict[Monomial, Scalar] = {}
    for (n, m), c in a._terms.items():
        for key, d in antipode_monomial(n, m)._terms.items():
            _accumulate(total, key, c * d)
    return Element._raw(total)

def antipode_by_extension(a: Element) -> Element:
    """
    Antipode built as the anti-homomorphic extension of S(x) = x^-1,
    S(y) = -q^-1 x^-1 y, normalized with multiply.
    """
    field_ = get_field()
    s_y = Element.monomial(-1, 1, -field_.q_power(-1))
    total = Element.zero()
    for (n, m), c in a.items():
        image = multiply(power(s_y, m), Element.monomial(-n, 0))
        total = total + image.scale(c)
    return total

def iterated_coproduct(a: Element, side: str) -> dict[Triple, Scalar]:
    """
    (Δ ⊗ id)Δ(a) for side "left", (id ⊗ Δ)Δ(a) for side "right".

    Raises:
        ValueError: If side is not "left" or "right"
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    field_ = get_field()
    total: dict[Triple, Scalar] = {}
    for (left, right), c in comultiply(a)._terms.items():
        split = left if side == "left" else right
        for (u, v), d in _coproduct_monomial(field_, *split).items():
            key = (u, v, right) if side == "left" else (left, u, v)
            _accumulate(total, key, c * d)
    return total

# ============================================================================
# Grading
# ============================================================================

def graded_component(a: Element, n: int) -> Element:
    """The part of a lying in H(n) = H_0 y^n."""
    return Element._raw({k: c for k, c in a._terms.items() if k[1] == n})

def filtration_component(a: Element, n: int) -> Element:
    """The part of a lying in Σ_{i<=n} H(i)."""
    return Element._raw({k: c for k, c in a._terms.items() if k[1] <= n})

def is_grouplike(a: Element) -> bool:
    return bool(a) and counit(a) == get_field().one and comultiply(a) == TensorElement.from_pair(a, a)

def is_skew_primitive(h: Element, g: Element, g2: Element) -> bool:
    """Whether Δ(h) = h ⊗ g + g2 ⊗ h."""
    return comultiply(h) == TensorElement.from_pair(h, g) + TensorElement.from_pair(g2, h)

# ============================================================================
# Windows
# ============================================================================

@dataclass(frozen=True)
class Window:
    """Finite frame n_lo <= n <= n_hi, 0 <= m <= m_max."""
    n_lo: int
    n_hi: int
    m_max: int

    def __post_init__(self) -> None:
        validate_window(self.n_lo, self.n_hi, self.m_max)

    @classmethod
    def parse(cls, text: str) -> "Window":
        return cls(*parse_window_text(text))

    def __str__(self) -> str:
        return f"{self.n_lo},{self.n_hi},{self.m_max}"

    def contains(self, n: int, m: int) -> bool:
        return self.n_lo <= n <= self.n_hi and 0 <= m <= self.m_max

    def x_range(self) -> range:
        return range(self.n_lo, self.n_hi + 1)

    def monomials(self) -> list[Monomial]:
        """All window monomials in (n, m) order."""
        return [(n, m) for n in self.x_range() for m in range(self.m_max + 1)]

    def degree_order(self) -> list[Monomial]:
        """All window monomials in (m, n) order."""
        return [(n, m) for m in range(self.m_max + 1) for n in self.x_range()]

    def shifted(self, r: int) -> "Window":
        return Window(self.n_lo + r, self.n_hi + r, self.m_max)

    def to_json(self) -> dict[str, int]:
        return {"n_lo": self.n_lo, "n_hi": self.n_hi, "m_max": self.m_max}

    @classmethod
    def from_json(cls, data: Any) -> "Window":
        if isinstance(data, str):
            return cls.parse(data)
        try:
            return cls(int(data["n_lo"]), int(data["n_hi"]), int(data["m_max"]))
        except (KeyError, TypeError, ValueError):
            raise WindowValidationError(f"Window JSON needs n_lo, n_hi and m_max, got {data!r}")

# ============================================================================
# Primitive Spaces
# ============================================================================

def _primitive_column_key(key: Monomial) -> tuple[int, int, int]:
    # highest y-degree first, then largest |n|, so pivots land on y and x^m
    n, m = key
    return (-m, -abs(n), -n)

def primitive_space(m: int, window: Window, base: int = 0) -> list[Element]:
    """
    Basis of {h : Δ(h) = h ⊗ x^m + x^base ⊗ h} inside the window span.

    The linear system equates all tensor coefficients of Δ(h) - h ⊗ x^m - x^base ⊗ h
    with zero, over every basis pair that occurs, and is solved exactly.

    Args:
        m: Exponent of the right grouplike x^m
        window: Candidate span {x^n y^j : n_lo <= n <= n_hi, j <= m_max}
        base: Exponent of the left grouplike (0 gives the (x^m, 1)-primitives)

    Returns:
        Reduced echelon basis, pivots normalized to 1

    Raises:
        WindowValidationError: If the window does not contain 1, x, y, x^m and x^base
    """
    required = {(0, 0), (1, 0), (0, 1), (m, 0), (base, 0)}
    missing = sorted(key for key in required if not window.contains(*key))
    if missing:
        raise WindowValidationError(
            f"Window {window} must contain 1, x, y, x^{m} and x^{base}; missing {missing}"
        )

    field_ = get_field()
    grouplike = Element.monomial(m, 0)
    left_grouplike = Element.monomial(base, 0)
    candidates = sorted(window.monomials(), key=_primitive_column_key)

    rows: dict[Pair, dict[Monomial, Scalar]] = {}
    for candidate in candidates:
        basis = Element.monomial(*candidate)
        defect = (comultiply(basis)
                  - TensorElement.from_pair(basis, grouplike)
                  - TensorElement.from_pair(left_grouplike, basis))
        for key, c in defect._terms.items():
            rows.setdefault(key, {})[candidate] = c

    kernel = nullspace(list(rows.values()), candidates, field_.one)
    basis_elements = [Element._raw({k: c for k, c in vector.items() if c}) for vector in kernel]
    logger.info(f"Primitive space for m={m}, base={base} on window {window} has dimension {len(basis_elements)}")
    return basis_elements
