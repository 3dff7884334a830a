"""
hq Coalgebra Morphisms

This module contains coalgebra endomorphisms of H including:
- The generator families θ_r, φ_α and φ^(s)_β as morphism words
- Word application and composition
- Window tabulation, coalgebra-map certification and triangular inversion
- Decomposition of a tabulated automorphism into Φ(tower)·φ_α·θ_r
- Level defects, filtration and leading-coefficient checks
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Optional, Union

# Import configuration
import config
from halgebra import (
    Element,
    Monomial,
    TensorElement,
    Window,
    comultiply,
    comultiply_monomial,
    counit,
    element_sum,
    graded_component,
)
from qscalar import GroundField, Scalar, get_field, q_falling, q_multi_binom
from sequences import AlphaSeq, BetaSeq, BetaTower, SemidirectElt, beta_run
from utils import row_reduce
from validators import (
    DecompositionError,
    NotCoalgebraMapError,
    SequenceValidationError,
    TriangularityError,
    ValidationError,
    WindowAdequacyError,
    WindowValidationError,
    validate_depth,
    validate_level,
)

logger = logging.getLogger(__name__)

ImageFunction = Callable[[int, int], Element]

# ============================================================================
# Atoms
# ============================================================================

@dataclass(frozen=True)
class Theta:
    """θ_r(x^n y^m) = x^{n+r} y^m."""
    r: int

    def image(self, n: int, m: int) -> Element:
        return Element.monomial(n + self.r, m)

    def inverse(self) -> "Theta":
        return Theta(-self.r)

    def to_json(self) -> dict[str, Any]:
        return {"theta": self.r}

@dataclass(frozen=True)
class PhiAlpha:
    """φ_α(x^n y^m) = α_{n,m} x^n y^m with α_{n,m} = α_n α_{n+1} ⋯ α_{n+m-1}."""
    alpha: AlphaSeq

    def image(self, n: int, m: int) -> Element:
        return Element.monomial(n, m, beta_run(self.alpha, n, 1, m))

    def inverse(self) -> "PhiAlpha":
        return PhiAlpha(self.alpha.inverse())

    def to_json(self) -> dict[str, Any]:
        return {"phi_alpha": self.alpha.to_json()}

@dataclass(frozen=True)
class PhiBeta:
    """
    φ^(s)_β: identity below y-degree s, and for m >= s

        x^n y^m + Σ_{1<=i<=m/s} binom(m,s)_{q,i} (β_{n,s;i} x^{n+is}
                  - β_{n,s;i-1} β_{n+m-s} x^{n+is-s}) y^{m-is}
    """
    s: int
    beta: BetaSeq

    def image(self, n: int, m: int) -> Element:
        s, beta = self.s, self.beta
        terms: dict[Monomial, Scalar] = {(n, m): get_field().one}
        if m < s or not beta:
            return Element(terms)
        tail = beta[n + m - s]
        for i in range(1, m // s + 1):
            c = q_multi_binom(m, s, i)
            degree = m - i * s
            high = c * beta_run(beta, n, s, i)
            low = c * beta_run(beta, n, s, i - 1) * tail
            _add(terms, (n + i * s, degree), high)
            _add(terms, (n + i * s - s, degree), -low)
        return Element(terms)

    def to_json(self) -> dict[str, Any]:
        return {"phi_beta": {"s": self.s, "beta": self.beta.to_json()}}

Atom = Union[Theta, PhiAlpha, PhiBeta]

def _add(terms: dict, key: Monomial, c: Scalar) -> None:
    if c:
        terms[key] = terms[key] + c if key in terms else c

def phi_beta_one_expansion(beta: BetaSeq, n: int, m: int) -> Element:
    """
    φ^(1)_β(x^n y^m) written as Σ_l a_{n,m,l} y^l, with a_{n,m,m} = x^n and

        a_{n,m,l} = (m, m-l)_q (β_{n,m-l} x^{n+m-l} - β_{n,m-l-1} β_{n+m-1} x^{n+m-l-1})

    for l < m. Agrees with PhiBeta(1, β).image.
    """
    terms: dict[Monomial, Scalar] = {(n, m): get_field().one}
    for l in range(m):
        c = q_falling(m, m - l)
        _add(terms, (n + m - l, l), c * beta_run(beta, n, 1, m - l))
        _add(terms, (n + m - l - 1, l), -c * beta_run(beta, n, 1, m - l - 1) * beta[n + m - 1])
    return Element(terms)

@lru_cache(maxsize=65536)
def _atom_image(atom: Atom, n: int, m: int, field_: GroundField) -> Element:
    return atom.image(n, m)

def _apply_atom(atom: Atom, a: Element) -> Element:
    field_ = get_field()
    return element_sum(_atom_image(atom, n, m, field_).scale(c) for (n, m), c in a.items())

def atom_from_json(data: Any) -> Atom:
    """
    Decode one word entry.

    Raises:
        ValidationError: If the entry is not a theta, phi_alpha or phi_beta object
    """
    if not isinstance(data, dict) or len(data) != 1:
        raise ValidationError(f"Word entry must be a single-key object, got {data!r}")
    (kind, value), = data.items()
    if kind == "theta":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"theta needs an integer shift, got {value!r}")
        return Theta(value)
    if kind == "phi_alpha":
        return PhiAlpha(AlphaSeq.from_json(value))
    if kind == "phi_beta":
        if not isinstance(value, dict) or "s" not in value or "beta" not in value:
            raise ValidationError("phi_beta needs 's' and 'beta'")
        return PhiBeta(validate_level(value["s"]), BetaSeq.from_json(value["beta"]))
    raise ValidationError(f"Unknown word entry {kind!r}; expected theta, phi_alpha or phi_beta")

# ============================================================================
# Morphisms
# ============================================================================

@dataclass(frozen=True)
class Morphism:
    """
    A composition word of generator atoms.

    The word [A, B] is the composite A∘B: B is applied first, then A.
    Words are never simplified.
    """
    word: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", tuple(self.word))

    def __len__(self) -> int:
        return len(self.word)

    def image(self, n: int, m: int) -> Element:
        return apply(self, Element.monomial(n, m))

    def inverse(self) -> "Morphism":
        """
        Inverse word for words of θ and φ_α atoms.

        Raises:
            ValidationError: If the word contains a φ^(s)_β atom
        """
        if any(isinstance(atom, PhiBeta) for atom in self.word):
            raise ValidationError("Words with phi_beta atoms are inverted through invert on a tabulation")
        return Morphism(tuple(atom.inverse() for atom in reversed(self.word)))

    def to_json(self) -> dict[str, Any]:
        return {"word": [atom.to_json() for atom in self.word]}

    @classmethod
    def from_json(cls, data: Any) -> "Morphism":
        if not isinstance(data, dict) or not isinstance(data.get("word"), list):
            raise ValidationError("Morphism JSON must be an object with a 'word' list")
        return cls(tuple(atom_from_json(entry) for entry in data["word"]))

def identity() -> Morphism:
    return Morphism(())

def theta(r: int) -> Morphism:
    """The shift automorphism θ_r."""
    if isinstance(r, bool) or not isinstance(r, int):
        raise ValidationError(f"theta needs an integer shift, got {r!r}")
    return Morphism((Theta(r),))

def phi_alpha(alpha: AlphaSeq) -> Morphism:
    """The graded automorphism φ_α. AlphaSeq already rejects zero values."""
    if not isinstance(alpha, AlphaSeq):
        raise SequenceValidationError("phi_alpha needs an AlphaSeq")
    return Morphism((PhiAlpha(alpha),))

def phi_beta(s: int, beta: BetaSeq) -> Morphism:
    """
    The level-s automorphism φ^(s)_β.

    Raises:
        SequenceValidationError: If s < 1
    """
    validate_level(s)
    if not isinstance(beta, BetaSeq):
        raise SequenceValidationError("phi_beta needs a BetaSeq")
    return Morphism((PhiBeta(s, beta),))

def compose(*morphisms: Morphism) -> Morphism:
    """compose(φ, ψ) acts as φ∘ψ; words are concatenated."""
    word: list[Atom] = []
    for morphism in morphisms:
        word.extend(morphism.word)
    return Morphism(tuple(word))

def apply(morphism: Morphism, a: Element) -> Element:
    """
    Apply a word to an element, rightmost atom first.
    """
    result = a
    for atom in reversed(morphism.word):
        if not result:
            break
        result = _apply_atom(atom, result)
    return result

def psi(a: SemidirectElt) -> Morphism:
    """Ψ(α, r) = φ_α θ_r."""
    return Morphism((PhiAlpha(a.alpha), Theta(a.r)))

def tower_morphism(tower: BetaTower) -> Morphism:
    """Φ(B) = φ^(1)_{β^(1)} ⋯ φ^(i)_{β^(i)}; zero levels contribute no atom."""
    return Morphism(tuple(
        PhiBeta(s, level) for s, level in enumerate(tower.levels, start=1) if level
    ))

def realize(tower: BetaTower, a: SemidirectElt) -> Morphism:
    """The automorphism Φ(B)·φ_α·θ_r."""
    return compose(tower_morphism(tower), psi(a))

# ============================================================================
# Tabulated Morphisms
# ============================================================================

@dataclass
class TabulatedMorphism:
    """
    A map recorded on the window monomials: table[(n, m)] = φ(x^n y^m).
    """
    window: Window
    table: dict[Monomial, Element] = field(default_factory=dict)

    def image(self, n: int, m: int) -> Element:
        """
        Raises:
            WindowAdequacyError: If (n, m) has no table entry
        """
        entry = self.table.get((n, m))
        if entry is None:
            raise WindowAdequacyError(f"Monomial x^{n} y^{m} is outside the table window {self.window}", index=(n, m))
        return entry

    def apply(self, a: Element) -> Element:
        return element_sum(self.image(n, m).scale(c) for (n, m), c in a.items())

    def to_json(self) -> dict[str, Any]:
        return {
            "window": self.window.to_json(),
            "table": [{"n": n, "m": m, "image": image.to_json()} for (n, m), image in sorted(self.table.items())],
        }

    @classmethod
    def from_json(cls, data: Any) -> "TabulatedMorphism":
        """
        Raises:
            ValidationError: If the payload is malformed or an entry lies outside the window
        """
        if not isinstance(data, dict) or "window" not in data or not isinstance(data.get("table"), list):
            raise ValidationError("TabulatedMorphism JSON needs 'window' and a 'table' list")
        window = Window.from_json(data["window"])
        table: dict[Monomial, Element] = {}
        for entry in data["table"]:
            try:
                key = (entry["n"], entry["m"])
                image = Element.from_json(entry["image"])
            except (KeyError, TypeError):
                raise ValidationError(f"Table entry needs n, m and image, got {entry!r}")
            if not window.contains(*key):
                raise WindowValidationError(f"Table entry {key} lies outside window {window}")
            table[key] = image
        return cls(window, table)

def tabulate(morphism: Morphism, window: Window) -> TabulatedMorphism:
    """Record apply(φ, x^n y^m) for every window monomial."""
    table = {key: apply(morphism, Element.monomial(*key)) for key in window.monomials()}
    logger.debug(f"Tabulated a word of length {len(morphism)} on window {window}")
    return TabulatedMorphism(window, table)

MorphismLike = Union[Morphism, TabulatedMorphism]

def _image_function(morphism: MorphismLike) -> ImageFunction:
    if isinstance(morphism, TabulatedMorphism):
        return morphism.image
    return morphism.image

# ============================================================================
# Coalgebra-Map Certification
# ============================================================================

@dataclass(frozen=True)
class CoalgebraReport:
    """Outcome of is_coalgebra_map."""
    passed: bool
    counterexample: Optional[Monomial] = None
    reason: str = ""
    checked: int = 0
    unverified: int = 0

    def to_json(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "counterexample": None if self.counterexample is None else {"n": self.counterexample[0], "m": self.counterexample[1]},
            "reason": self.reason,
            "checked": self.checked,
            "unverified": self.unverified,
        }

def _span_solver(basis: list[Element]) -> Optional[Callable[[Element], Optional[list[Scalar]]]]:
    """
    Coordinates of vectors in span(basis), or None when the basis is dependent.

    The returned solver gives None for vectors outside the span.
    """
    field_ = get_field()
    columns = sorted({key for vector in basis for key in vector})
    rows = []
    for j, vector in enumerate(basis):
        row: dict[Any, Scalar] = {("x", key): c for key, c in vector.items()}
        row[("t", j)] = field_.one
        rows.append(row)
    order = [("x", key) for key in columns] + [("t", j) for j in range(len(basis))]
    reduced, pivots = row_reduce(rows, order, field_.one)
    if any(kind == "t" for kind, _ in pivots):
        return None

    def solve(vector: Element) -> Optional[list[Scalar]]:
        coordinates = [field_.zero] * len(basis)
        rebuilt: dict[Monomial, Scalar] = {}
        for row, (_, key) in zip(reduced, pivots):
            factor = vector.coefficient(*key)
            if not factor:
                continue
            for (kind, index), c in row.items():
                if kind == "x":
                    _add(rebuilt, index, factor * c)
                else:
                    coordinates[index] = coordinates[index] + factor * c
        return coordinates if Element(rebuilt) == vector else None

    return solve

def _forced_images(
    residual: TensorElement,
    missing: list[tuple[Monomial, Monomial, Scalar]],
    solve: Callable[[Element], Optional[list[Scalar]]],
) -> Optional[dict[Monomial, Element]]:
    """
    Solve residual = Σ b·φ(left) ⊗ U_right for the images U outside the table.

    Returns None when no such images exist.
    """
    slices: dict[Monomial, dict[Monomial, Scalar]] = {}
    for (left, right), c in residual.items():
        slices.setdefault(right, {})[left] = c

    forced: dict[Monomial, dict[Monomial, Scalar]] = {right: {} for _, right, _ in missing}
    for w, vector in slices.items():
        coordinates = solve(Element(vector))
        if coordinates is None:
            return None
        for (_, right, b), u in zip(missing, coordinates):
            if u:
                forced[right][w] = u / b
    return {right: Element(terms) for right, terms in forced.items()}

def is_coalgebra_map(morphism: MorphismLike, window: Optional[Window] = None) -> CoalgebraReport:
    """
    Check ε∘φ = ε and Δφ = (φ⊗φ)Δ on every window monomial.

    Monomials are visited by y-degree first, so the reported counterexample is
    one of lowest degree. For tabulated maps the window defaults to the table's.
    Where a coproduct reaches right legs outside the table, the images it forces
    there are solved for; they must exist, preserve the counit and agree across
    every entry that forces them. Entries whose left images are linearly
    dependent leave those images undetermined and are counted as unverified.

    Args:
        morphism: Word or tabulated map
        window: Monomials to check

    Returns:
        CoalgebraReport with the first counterexample, if any
    """
    if window is None:
        if not isinstance(morphism, TabulatedMorphism):
            raise WindowValidationError("A window is required to certify a morphism word")
        window = morphism.window

    image = _image_function(morphism)
    tabulated = isinstance(morphism, TabulatedMorphism)
    checked = 0
    unverified = 0
    forced_so_far: dict[Monomial, tuple[Element, Monomial]] = {}

    def failure(n: int, m: int, reason: str) -> CoalgebraReport:
        logger.info(f"Coalgebra check failed at x^{n} y^{m}: {reason}")
        return CoalgebraReport(False, (n, m), reason, checked, unverified)

    for n, m in window.degree_order():
        target = image(n, m)
        source = Element.monomial(n, m)

        if counit(target) != counit(source):
            checked += 1
            return failure(n, m, "counit is not preserved")

        legs = comultiply_monomial(n, m).items()
        missing = [(left, right, b) for (left, right), b in legs if tabulated and right not in morphism.table]
        if not missing:
            checked += 1
            if comultiply(target) != comultiply_monomial(n, m).map_legs(image, image):
                return failure(n, m, "coproduct is not preserved")
            continue

        solve = _span_solver([image(*left) for left, _, _ in missing])
        if solve is None:
            unverified += 1
            logger.warning(f"Images forced outside the table by x^{n} y^{m} are undetermined")
            continue

        residual = comultiply(target)
        for (left, right), b in legs:
            if right in morphism.table:
                residual = residual - TensorElement.from_pair(image(*left), image(*right)).scale(b)

        checked += 1
        forced = _forced_images(residual, missing, solve)
        if forced is None:
            return failure(n, m, "coproduct is not preserved")
        for (a, d), u in sorted(forced.items()):
            if counit(u) != counit(Element.monomial(a, d)):
                return failure(n, m, f"coproduct forces an image of x^{a} y^{d} outside the table that breaks the counit")
            earlier, source = forced_so_far.setdefault((a, d), (u, (n, m)))
            if earlier != u:
                return failure(n, m, f"coproduct forces an image of x^{a} y^{d} outside the table that conflicts with the one forced by x^{source[0]} y^{source[1]}")

    return CoalgebraReport(True, None, "", checked, unverified)

# ============================================================================
# Triangular Inversion
# ============================================================================

def _leading_term(n: int, m: int, image: Element) -> tuple[int, Scalar]:
    if image.y_degree > m:
        raise TriangularityError(f"Image of x^{n} y^{m} has y-degree {image.y_degree} above {m}")
    leading = graded_component(image, m)
    if len(leading) != 1:
        raise TriangularityError(f"Degree-{m} part of the image of x^{n} y^{m} is not a single monomial")
    ((k, _), c), = leading.items()
    return k, c

def invert(tab: TabulatedMorphism, target: Optional[Window] = None) -> TabulatedMorphism:
    """
    Tabulated inverse by back-substitution, degree by degree.

    Every entry must have the shape c·x^{n+r} y^m + (lower y-degree) with c ≠ 0 and
    one shift r for the whole table. Inverse entries whose back-substitution needs a
    missing entry are dropped; without a target, the result window shrinks to the
    longest run of x-exponents computable at every degree (leftmost on ties).

    Args:
        tab: Tabulated triangular map
        target: Window on which every inverse entry is required

    Returns:
        The tabulated inverse

    Raises:
        TriangularityError: If an entry is not triangular or the shift is not uniform
        WindowAdequacyError: If a required entry cannot be computed
    """
    field_ = get_field()
    leading: dict[Monomial, tuple[int, Scalar]] = {}
    shift: Optional[int] = None
    for (n, m), image in tab.table.items():
        k, c = _leading_term(n, m, image)
        if shift is None:
            shift = k - n
        elif k - n != shift:
            raise TriangularityError(f"Leading term of x^{n} y^{m} is shifted by {k - n}, expected {shift}")
        leading[(n, m)] = (k, c)

    if shift is None:
        raise WindowAdequacyError("Cannot invert an empty table")

    inverse: dict[Monomial, Element] = {}
    missing: dict[Monomial, Monomial] = {}
    for (n, m) in sorted(tab.table, key=lambda key: (key[1], key[0])):
        k, c = leading[(n, m)]
        lower = tab.table[(n, m)] - Element.monomial(k, m, c)
        needed = [key for key in lower.terms if key not in inverse]
        if needed:
            first = min(needed)
            missing[(k, m)] = missing.get(first, first)
            continue
        correction = element_sum(inverse[key].scale(d) for key, d in lower.items())
        inverse[(k, m)] = (Element.monomial(n, m) - correction).scale(field_.inverse(c))

    window = tab.window
    if target is not None:
        for key in target.degree_order():
            if key not in inverse:
                index = missing.get(key, key)
                raise WindowAdequacyError(f"Inverse entry x^{key[0]} y^{key[1]} needs x^{index[0]} y^{index[1]}, outside the table", index=index)
        result = TabulatedMorphism(target, {key: inverse[key] for key in target.monomials()})
    else:
        shifted = window.shifted(shift)
        complete = [k for k in shifted.x_range() if all((k, m) in inverse for m in range(window.m_max + 1))]
        run = _longest_run(complete)
        if run is None:
            raise WindowAdequacyError(f"No inverse entry is computable on window {window}", index=min(missing.values(), default=None))
        shrunk = Window(run[0], run[1], window.m_max)
        result = TabulatedMorphism(shrunk, {key: inverse[key] for key in shrunk.monomials()})

    logger.info(f"Inverted table on {window} with shift {shift}, inverse window {result.window}")
    return result

def _longest_run(values: list[int]) -> Optional[tuple[int, int]]:
    best: Optional[tuple[int, int]] = None
    start = previous = None
    for value in values + [None]:  # type: ignore[operator]
        if value is not None and previous is not None and value == previous + 1:
            previous = value
            continue
        if start is not None and (best is None or previous - start > best[1] - best[0]):
            best = (start, previous)
        start = previous = value
    return best

# ============================================================================
# Level Defects and Probes
# ============================================================================

def _read_defect(residual: Element, n: int, s: int) -> Scalar:
    # residual must be c·(x^{n+s} - x^n)
    field_ = get_field()
    if not residual:
        return field_.zero
    c = residual.coefficient(n + s, 0)
    if residual != Element({(n + s, 0): c, (n, 0): -c}):
        raise DecompositionError(f"Degree-{s} residual at index {n} is not a multiple of x^{n + s} - x^{n}")
    return c

def level_defect(morphism: MorphismLike, s: int, indices: range) -> BetaSeq:
    """
    f_s(φ) for φ in Aut_{s-1}: the β with φ(x^n y^s) = x^n y^s + β_n(x^{n+s} - x^n).

    Raises:
        DecompositionError: If a residual has another shape
    """
    validate_level(s)
    image = _image_function(morphism)
    values = {}
    for n in indices:
        values[n] = _read_defect(image(n, s) - Element.monomial(n, s), n, s)
    return BetaSeq(values)

def fixes_below(morphism: MorphismLike, m: int, window: Window) -> bool:
    """Whether φ fixes every window monomial of y-degree at most m (membership in Aut_m)."""
    image = _image_function(morphism)
    return all(
        image(n, j) == Element.monomial(n, j)
        for n, j in window.degree_order() if j <= m
    )

def leading_coefficients(morphism: MorphismLike, window: Window) -> dict[Monomial, Scalar]:
    """
    The coefficients α_{n,m} of x^n y^m in φ(x^n y^m) for a filtration-preserving φ.

    Raises:
        DecompositionError: If an image leaves Σ_{i<=m} H(i) or its degree-m part is
            not a nonzero multiple of x^n y^m
    """
    image = _image_function(morphism)
    result: dict[Monomial, Scalar] = {}
    for n, m in window.degree_order():
        target = image(n, m)
        if target.y_degree > m:
            raise DecompositionError(f"Image of x^{n} y^{m} leaves the filtration")
        top = graded_component(target, m)
        c = top.coefficient(n, m)
        if not c or len(top) != 1:
            raise DecompositionError(f"Degree-{m} part of the image of x^{n} y^{m} is not a nonzero multiple of it")
        result[(n, m)] = c
    return result

def peel_tower(image: ImageFunction, lo: int, hi: int, depth: int, trim_top: bool = False) -> BetaTower:
    """
    Read a tower off an automorphism of Aut_* level by level.

    β^(i)_n(x^{n+i} - x^n) = φ(x^n y^i) - φ^(1)_{β^(1)} ⋯ φ^(i-1)_{β^(i-1)}(x^n y^i).

    Args:
        image: φ on basis monomials
        lo: Lowest index read
        hi: Highest index read
        depth: Number of levels
        trim_top: Read level i only up to hi - i + 1

    Returns:
        The tower (β^(1), …, β^(depth))

    Raises:
        DecompositionError: If a residual is not a multiple of x^{n+i} - x^n
    """
    levels: list[BetaSeq] = []
    for i in range(1, depth + 1):
        prefix = tower_morphism(BetaTower(tuple(levels))) if levels else identity()
        top = hi - i + 1 if trim_top else hi
        values = {}
        for n in range(lo, top + 1):
            monomial = Element.monomial(n, i)
            residual = image(n, i) - apply(prefix, monomial)
            values[n] = _read_defect(residual, n, i)
        levels.append(BetaSeq(values))
        logger.debug(f"Level {i} read over indices {lo}..{top}: support {levels[-1].support}")
    return BetaTower(tuple(levels))

# ============================================================================
# Decomposition
# ============================================================================

@dataclass(frozen=True)
class DecompositionResult:
    """φ = Φ(tower)·φ_α·θ_r."""
    r: int
    alpha: AlphaSeq
    tower: BetaTower

    @property
    def semidirect(self) -> SemidirectElt:
        return SemidirectElt(self.alpha, self.r)

    def morphism(self) -> Morphism:
        return realize(self.tower, self.semidirect)

    def to_json(self) -> dict[str, Any]:
        return {"r": self.r, "alpha": self.alpha.to_json(), "tower": self.tower.to_json()}

def decomposition_window(lo: int, hi: int, depth: int, r: int = 0) -> Window:
    """
    A table window adequate for decomposing a map whose parameters live in [lo, hi].

    The source x-range is the parameter range widened by depth plus
    DECOMPOSITION_MARGIN_EXTRA on both sides and shifted back by r.
    """
    validate_depth(depth)
    pad = depth + config.DECOMPOSITION_MARGIN_EXTRA
    return Window(lo - pad - r, hi + pad - r, depth)

def _check_margin(kind: str, indices: tuple[int, ...], lo: int, hi: int, margin: int) -> None:
    for n in indices:
        if n < lo + margin or n > hi - margin:
            raise WindowAdequacyError(
                f"{kind} is nonzero at index {n}, within {margin} of the table edge {lo}..{hi}; widen the window",
                index=n,
            )

def decompose(tab: TabulatedMorphism, depth: int) -> DecompositionResult:
    """
    Factor a tabulated coalgebra automorphism as Φ(tower)·φ_α·θ_r.

    r comes from φ(x^n) = x^{n+r}; α_{n+r} is the coefficient of x^{n+r} y in φ(x^n y);
    after stripping φ_α θ_r the tower is peeled level by level. Extracted values
    within depth of the table edge raise WindowAdequacyError, and the factorization
    is checked against the table up to y-degree depth.

    Args:
        tab: Tabulated map
        depth: Number of tower levels to extract

    Returns:
        DecompositionResult

    Raises:
        WindowValidationError: If depth exceeds the window's m_max
        NotCoalgebraMapError: If the table is not a coalgebra map
        DecompositionError: If the map does not have the factored shape or α_n = 0
        WindowAdequacyError: If the window is too narrow for the extracted parameters
    """
    validate_depth(depth)
    window = tab.window
    if depth > window.m_max:
        raise WindowValidationError(f"Depth {depth} exceeds the table's m_max {window.m_max}")

    report = is_coalgebra_map(tab)
    if not report.passed:
        n, m = report.counterexample
        raise NotCoalgebraMapError(f"Table is not a coalgebra map: {report.reason} at x^{n} y^{m}", report=report)

    field_ = get_field()

    r: Optional[int] = None
    for n in window.x_range():
        image = tab.image(n, 0)
        if len(image) != 1:
            raise DecompositionError(f"Image of x^{n} is not a grouplike")
        ((k, j), c), = image.items()
        if j != 0 or c != field_.one or (r is not None and k - n != r):
            raise DecompositionError(f"Image of x^{n} is not x^(n+r) for a single shift r")
        r = k - n

    lo, hi = window.n_lo + r, window.n_hi + r

    alpha_values: dict[int, Scalar] = {}
    for n in window.x_range():
        top = graded_component(tab.image(n, 1), 1)
        c = top.coefficient(n + r, 1)
        if not c:
            raise DecompositionError(f"Degree-1 coefficient alpha_{n + r} is zero")
        if len(top) != 1:
            raise DecompositionError(f"Degree-1 part of the image of x^{n} y is not a multiple of x^{n + r} y")
        alpha_values[n + r] = c
    alpha = AlphaSeq(alpha_values)
    _check_margin("alpha deviation", alpha.support, lo, hi, depth)

    def stripped(k: int, i: int) -> Element:
        return tab.image(k - r, i).scale(field_.inverse(beta_run(alpha, k, 1, i)))

    tower = peel_tower(stripped, lo, hi, depth, trim_top=True)
    for i, level in enumerate(tower.levels, start=1):
        _check_margin(f"level {i}", level.support, lo, hi, depth)

    rebuilt = realize(tower, SemidirectElt(alpha, r))
    for (n, m), image in sorted(tab.table.items()):
        if m > depth or apply(rebuilt, Element.monomial(n, m)) == image:
            continue
        if lo + depth <= n + r <= hi - depth:
            raise DecompositionError(f"Factorization does not reproduce the image of x^{n} y^{m}")
        raise WindowAdequacyError(f"Image of x^{n} y^{m} depends on parameters outside the table window {window}", index=n + r)

    logger.info(f"Decomposed table on {window}: r={r}, alpha support {alpha.support}, depth {depth}")
    return DecompositionResult(r, alpha, tower)
