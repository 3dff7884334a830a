"""
hq Sequences

This module contains the parameter types of the group layer:
- BetaSeq (additive, finitely supported) and AlphaSeq (multiplicative)
- Index shifts, runs β_{n,t;m} and α⟨i⟩
- The semidirect product (k^×)^ℤ ⋊ ℤ
- BetaTower, a truncated element of G_∞
"""

from dataclasses import dataclass
from typing import Any, Mapping, Optional, Union

from qscalar import Scalar, get_field
from validators import SequenceValidationError, validate_depth

# ============================================================================
# Sequences
# ============================================================================

def _decode_entries(data: Any, key: str) -> dict[int, Scalar]:
    if not isinstance(data, dict) or not isinstance(data.get(key), list):
        raise SequenceValidationError(f"Sequence JSON must be an object with a '{key}' list")
    field_ = get_field()
    values: dict[int, Scalar] = {}
    for entry in data[key]:
        try:
            n = entry["n"]
            c = field_.from_json(entry["c"])
        except (KeyError, TypeError):
            raise SequenceValidationError(f"Sequence entry needs n and c, got {entry!r}")
        if isinstance(n, bool) or not isinstance(n, int):
            raise SequenceValidationError(f"Sequence index must be an integer, got {n!r}")
        if n in values:
            raise SequenceValidationError(f"Duplicate sequence index {n}")
        values[n] = c
    return values

class BetaSeq:
    """
    A finitely supported sequence (β_n) in k^ℤ.

    Only nonzero values are stored. Hashable and immutable.
    """

    __slots__ = ("_values", "_hash")

    def __init__(self, values: Optional[Mapping[int, Any]] = None):
        field_ = get_field()
        cleaned: dict[int, Scalar] = {}
        for n, c in (values or {}).items():
            if isinstance(n, bool) or not isinstance(n, int):
                raise SequenceValidationError(f"Sequence index must be an integer, got {n!r}")
            c = field_.scalar(c)
            if c:
                cleaned[n] = c
        self._values = cleaned
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls) -> "BetaSeq":
        return cls()

    @classmethod
    def indicator(cls, n: int, c: Any = 1) -> "BetaSeq":
        """c·e_n."""
        return cls({n: c})

    def __getitem__(self, n: int) -> Scalar:
        value = self._values.get(n)
        return get_field().zero if value is None else value

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._values))

    def items(self) -> list[tuple[int, Scalar]]:
        return sorted(self._values.items())

    def support_range(self) -> Optional[tuple[int, int]]:
        if not self._values:
            return None
        return min(self._values), max(self._values)

    def __bool__(self) -> bool:
        return bool(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BetaSeq):
            return NotImplemented
        return self._values == other._values

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("beta", frozenset(self._values.items())))
        return self._hash

    def __add__(self, other: "BetaSeq") -> "BetaSeq":
        keys = set(self._values) | set(other._values)
        return BetaSeq({n: self[n] + other[n] for n in keys})

    def __sub__(self, other: "BetaSeq") -> "BetaSeq":
        keys = set(self._values) | set(other._values)
        return BetaSeq({n: self[n] - other[n] for n in keys})

    def __neg__(self) -> "BetaSeq":
        return BetaSeq({n: -c for n, c in self._values.items()})

    def __mul__(self, other: "BetaSeq") -> "BetaSeq":
        """Pointwise product."""
        if not isinstance(other, BetaSeq):
            return NotImplemented
        keys = set(self._values) & set(other._values)
        return BetaSeq({n: self._values[n] * other._values[n] for n in keys})

    def scale(self, c: Any) -> "BetaSeq":
        c = get_field().scalar(c)
        return BetaSeq({n: v * c for n, v in self._values.items()})

    def scaled(self, alpha: "AlphaSeq") -> "BetaSeq":
        """Pointwise product α·β, the action of (k^×)^ℤ on k^ℤ."""
        return BetaSeq({n: v * alpha[n] for n, v in self._values.items()})

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"BetaSeq({{{body}}})"

    def to_json(self) -> dict[str, Any]:
        field_ = get_field()
        return {"support": [{"n": n, "c": field_.to_json(c)} for n, c in self.items()]}

    @classmethod
    def from_json(cls, data: Any) -> "BetaSeq":
        return cls(_decode_entries(data, "support"))

class AlphaSeq:
    """
    A sequence (α_n) in (k^×)^ℤ that equals a constant base value outside a
    finite set of indices.

    The base defaults to 1. Stored deviations differ from the base, and every
    value is nonzero.
    """

    __slots__ = ("_base", "_deviation", "_hash")

    def __init__(self, deviation: Optional[Mapping[int, Any]] = None, base: Any = 1):
        field_ = get_field()
        base = field_.scalar(base)
        if not base:
            raise SequenceValidationError("AlphaSeq base value must be nonzero")

        cleaned: dict[int, Scalar] = {}
        for n, c in (deviation or {}).items():
            if isinstance(n, bool) or not isinstance(n, int):
                raise SequenceValidationError(f"Sequence index must be an integer, got {n!r}")
            c = field_.scalar(c)
            if not c:
                raise SequenceValidationError(f"AlphaSeq value at index {n} is zero; all values must be units")
            if c != base:
                cleaned[n] = c

        self._base = base
        self._deviation = cleaned
        self._hash: Optional[int] = None

    @classmethod
    def one(cls) -> "AlphaSeq":
        return cls()

    @classmethod
    def constant(cls, c: Any) -> "AlphaSeq":
        return cls(base=c)

    @property
    def base(self) -> Scalar:
        return self._base

    def __getitem__(self, n: int) -> Scalar:
        return self._deviation.get(n, self._base)

    @property
    def support(self) -> tuple[int, ...]:
        """Indices where the value differs from the base."""
        return tuple(sorted(self._deviation))

    def items(self) -> list[tuple[int, Scalar]]:
        return sorted(self._deviation.items())

    def is_one(self) -> bool:
        return not self._deviation and self._base == get_field().one

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlphaSeq):
            return NotImplemented
        return self._base == other._base and self._deviation == other._deviation

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("alpha", self._base, frozenset(self._deviation.items())))
        return self._hash

    def __mul__(self, other: "AlphaSeq") -> "AlphaSeq":
        """Pointwise product."""
        if not isinstance(other, AlphaSeq):
            return NotImplemented
        keys = set(self._deviation) | set(other._deviation)
        return AlphaSeq({n: self[n] * other[n] for n in keys}, base=self._base * other._base)

    def inverse(self) -> "AlphaSeq":
        """Pointwise inverse α⁻¹."""
        field_ = get_field()
        return AlphaSeq(
            {n: field_.inverse(c) for n, c in self._deviation.items()},
            base=field_.inverse(self._base),
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"AlphaSeq({{{body}}}, base={self._base})"

    def to_json(self) -> dict[str, Any]:
        field_ = get_field()
        data: dict[str, Any] = {"deviation": [{"n": n, "c": field_.to_json(c)} for n, c in self.items()]}
        if self._base != field_.one:
            data["base"] = field_.to_json(self._base)
        return data

    @classmethod
    def from_json(cls, data: Any) -> "AlphaSeq":
        deviation = _decode_entries(data, "deviation")
        base = get_field().from_json(data["base"]) if "base" in data else 1
        return cls(deviation, base=base)

Sequence = Union[BetaSeq, AlphaSeq]

def shift(sigma: Sequence, r: int) -> Sequence:
    """
    Index shift σ[r]_n = σ_{n+r}.

    Args:
        sigma: BetaSeq or AlphaSeq
        r: Shift amount

    Returns:
        A sequence of the same type
    """
    if isinstance(sigma, AlphaSeq):
        return AlphaSeq({n - r: c for n, c in sigma.items()}, base=sigma.base)
    return BetaSeq({n - r: c for n, c in sigma.items()})

def beta_run(sigma: Sequence, n: int, t: int, m: int) -> Scalar:
    """
    The run β_{n,t;m} = β_n β_{n+t} ⋯ β_{n+(m-1)t}, with the empty run equal to 1.

    β_{n,1;m} is the consecutive run β_{n,m}. Works on AlphaSeq as well.

    Raises:
        SequenceValidationError: If t < 1 or m < 0
    """
    if t < 1:
        raise SequenceValidationError(f"Run step t must be at least 1, got {t}")
    if m < 0:
        raise SequenceValidationError(f"Run length m must be non-negative, got {m}")
    product = get_field().one
    for i in range(m):
        value = sigma[n + i * t]
        if not value:
            return get_field().zero
        product = product * value
    return product

def alpha_angle(alpha: AlphaSeq, i: int) -> AlphaSeq:
    """
    α⟨i⟩ = α α[1] ⋯ α[i-1], so α⟨i⟩_n = α_n α_{n+1} ⋯ α_{n+i-1}.

    Raises:
        SequenceValidationError: If i < 1
    """
    if i < 1:
        raise SequenceValidationError(f"alpha_angle needs i >= 1, got {i}")
    base = alpha.base ** i
    if not alpha.support:
        return AlphaSeq(base=base)
    lo, hi = alpha.support[0] - i + 1, alpha.support[-1]
    return AlphaSeq({n: beta_run(alpha, n, 1, i) for n in range(lo, hi + 1)}, base=base)

# ============================================================================
# Semidirect Product
# ============================================================================

@dataclass(frozen=True)
class SemidirectElt:
    """
    An element (α, r) of (k^×)^ℤ ⋊ ℤ with (α, r)(β, t) = (α(r·β), r + t),
    where (r·β)_n = β_{n-r}.
    """
    alpha: AlphaSeq
    r: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.alpha, AlphaSeq):
            raise SequenceValidationError("SemidirectElt alpha must be an AlphaSeq")
        if isinstance(self.r, bool) or not isinstance(self.r, int):
            raise SequenceValidationError(f"SemidirectElt r must be an integer, got {self.r!r}")

    def __mul__(self, other: "SemidirectElt") -> "SemidirectElt":
        return semidirect_mul(self, other)

    def inv(self) -> "SemidirectElt":
        return semidirect_inverse(self)

    def to_json(self) -> dict[str, Any]:
        return {"alpha": self.alpha.to_json(), "r": self.r}

    @classmethod
    def from_json(cls, data: Any) -> "SemidirectElt":
        if not isinstance(data, dict) or "alpha" not in data:
            raise SequenceValidationError("SemidirectElt JSON needs 'alpha' and 'r'")
        return cls(AlphaSeq.from_json(data["alpha"]), data.get("r", 0))

def semidirect_identity() -> SemidirectElt:
    return SemidirectElt(AlphaSeq.one(), 0)

def semidirect_mul(a: SemidirectElt, b: SemidirectElt) -> SemidirectElt:
    """(α, r)(β, t) = (α·β[-r], r + t)."""
    return SemidirectElt(a.alpha * shift(b.alpha, -a.r), a.r + b.r)

def semidirect_inverse(a: SemidirectElt) -> SemidirectElt:
    """(α, r)⁻¹ = (α⁻¹[r], -r)."""
    return SemidirectElt(shift(a.alpha.inverse(), a.r), -a.r)

# ============================================================================
# Towers
# ============================================================================

@dataclass(frozen=True)
class BetaTower:
    """
    A truncated element (β^(1), …, β^(i)) of G_∞ at depth i.
    """
    levels: tuple[BetaSeq, ...]

    def __post_init__(self) -> None:
        levels = tuple(self.levels)
        if not levels:
            raise SequenceValidationError("A tower needs depth at least 1")
        if not all(isinstance(level, BetaSeq) for level in levels):
            raise SequenceValidationError("Tower levels must be BetaSeq values")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def zero(cls, depth: int) -> "BetaTower":
        validate_depth(depth)
        return cls(tuple(BetaSeq() for _ in range(depth)))

    @classmethod
    def of(cls, *levels: BetaSeq) -> "BetaTower":
        return cls(tuple(levels))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> BetaSeq:
        """β^(i), 1-based; zero above the depth."""
        if i < 1:
            raise SequenceValidationError(f"Tower levels start at 1, got {i}")
        return self.levels[i - 1] if i <= self.depth else BetaSeq()

    def padded(self, depth: int) -> "BetaTower":
        """Extend with zero levels up to depth."""
        if depth <= self.depth:
            return self
        return BetaTower(self.levels + tuple(BetaSeq() for _ in range(depth - self.depth)))

    def truncate(self, depth: int) -> "BetaTower":
        """The projection G_j -> G_depth keeping the first depth levels."""
        validate_depth(depth)
        if depth > self.depth:
            raise SequenceValidationError(f"Cannot truncate a depth-{self.depth} tower to depth {depth}")
        return BetaTower(self.levels[:depth])

    def is_zero(self) -> bool:
        return not any(self.levels)

    def support_range(self) -> Optional[tuple[int, int]]:
        """Smallest index range containing every level's support."""
        ranges = [level.support_range() for level in self.levels if level]
        if not ranges:
            return None
        return min(lo for lo, _ in ranges), max(hi for _, hi in ranges)

    def to_json(self) -> dict[str, Any]:
        return {"levels": [level.to_json() for level in self.levels]}

    @classmethod
    def from_json(cls, data: Any) -> "BetaTower":
        if not isinstance(data, dict) or not isinstance(data.get("levels"), list):
            raise SequenceValidationError("BetaTower JSON must be an object with a 'levels' list")
        return cls(tuple(BetaSeq.from_json(level) for level in data["levels"]))
