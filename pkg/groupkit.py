"""
hq Group Layer

This module contains the group structure on towers:
- The recursive product on BetaTower, read off composites of tower morphisms
- The closed forms at levels 2 and 3
- Inverses through tabulation and inversion
- The action of (k^×)^ℤ ⋊ ℤ on towers

The sequence and semidirect types live in sequences and are re-exported here.
"""

import logging
from typing import Iterable, Optional

# Import configuration
import config
from halgebra import Element
from morphisms import (
    apply,
    compose,
    decompose,
    decomposition_window,
    invert,
    peel_tower,
    tabulate,
    tower_morphism,
)
from qscalar import q_factorial, q_int
from sequences import (
    AlphaSeq,
    BetaSeq,
    BetaTower,
    SemidirectElt,
    Sequence,
    alpha_angle,
    beta_run,
    semidirect_identity,
    semidirect_inverse,
    semidirect_mul,
    shift,
)
from validators import (
    SequenceValidationError,
    ValidationError,
    WindowAdequacyError,
    parse_index_range,
    validate_depth,
)

__all__ = [
    "AlphaSeq",
    "BetaSeq",
    "BetaTower",
    "SemidirectElt",
    "Sequence",
    "act",
    "alpha_angle",
    "beta_run",
    "g_inverse",
    "g_mul",
    "g_mul_closed",
    "semidirect_identity",
    "semidirect_inverse",
    "semidirect_mul",
    "shift",
]

logger = logging.getLogger(__name__)

# ============================================================================
# Tower Group
# ============================================================================

def _aligned(towers: Iterable[BetaTower], depth: Optional[int]) -> list[BetaTower]:
    towers = list(towers)
    target = depth if depth is not None else max(t.depth for t in towers)
    validate_depth(target)
    return [t.padded(target).truncate(target) for t in towers]

def _product_index_range(towers: list[BetaTower], depth: int,
                         index_window: Optional[str]) -> Optional[tuple[int, int]]:
    # δ^(j)_n vanishes unless [n, n+j-1] meets the input supports
    ranges = [t.support_range() for t in towers]
    ranges = [r for r in ranges if r is not None]
    if not ranges:
        return None
    lo = min(a for a, _ in ranges) - depth + 1
    hi = max(b for _, b in ranges)

    allowed_lo, allowed_hi = parse_index_range(index_window or config.GROUP_INDEX_WINDOW)
    if lo < allowed_lo:
        raise WindowAdequacyError(f"Tower product needs index {lo}, outside the index window {allowed_lo},{allowed_hi}", index=lo)
    if hi > allowed_hi:
        raise WindowAdequacyError(f"Tower product needs index {hi}, outside the index window {allowed_lo},{allowed_hi}", index=hi)
    return lo, hi

def g_mul(left: BetaTower, right: BetaTower, depth: Optional[int] = None,
          index_window: Optional[str] = None) -> BetaTower:
    """
    Product in G_depth, read off the composite Φ(left)Φ(right) level by level.

    δ^(1) = β^(1) + γ^(1), and δ^(j)_n(x^{n+j} - x^n) is the difference between
    the composite image of x^n y^j and φ^(1)_{δ^(1)} ⋯ φ^(j-1)_{δ^(j-1)}(x^n y^j).

    Args:
        left: Tower B
        right: Tower C
        depth: Result depth (defaults to the larger input depth; inputs are padded)
        index_window: "lo,hi" bound on every index the product may need

    Returns:
        The product tower

    Raises:
        WindowAdequacyError: If the product needs indices outside the index window
    """
    left, right = _aligned((left, right), depth)
    depth = left.depth

    index_range = _product_index_range([left, right], depth, index_window)
    if index_range is None:
        return BetaTower.zero(depth)

    composite = compose(tower_morphism(left), tower_morphism(right))
    lo, hi = index_range
    logger.debug(f"g_mul at depth {depth} over indices {lo}..{hi}")

    def image(n: int, j: int) -> Element:
        return apply(composite, Element.monomial(n, j))

    return peel_tower(image, lo, hi, depth)

def g_mul_closed(level: int, left: BetaTower, right: BetaTower) -> BetaSeq:
    """
    Closed forms for the level-2 and level-3 parts of a tower product.

    δ^(2) = β^(2) + γ^(2) - (2)_q β^(1)γ^(1)[1]
    δ^(3) = β^(3) + γ^(3) - (3)_q(β^(2)γ^(1)[2] - β^(2)[1]γ^(1))
            - (3)!_q (β^(1) + γ^(1)) β^(1)[1] γ^(1)[2]

    Raises:
        SequenceValidationError: If level is not 2 or 3 or a tower is too shallow
    """
    if level not in (2, 3):
        raise SequenceValidationError(f"Closed forms exist for levels 2 and 3 only, got {level}")
    if left.depth < level or right.depth < level:
        raise SequenceValidationError(f"Closed form at level {level} needs towers of depth >= {level}")

    b1, b2 = left.level(1), left.level(2)
    c1, c2 = right.level(1), right.level(2)

    if level == 2:
        return b2 + c2 - (b1 * shift(c1, 1)).scale(q_int(2))

    b3, c3 = left.level(3), right.level(3)
    middle = (b2 * shift(c1, 2) - shift(b2, 1) * c1).scale(q_int(3))
    cubic = ((b1 + c1) * shift(b1, 1) * shift(c1, 2)).scale(q_factorial(3))
    return b3 + c3 - middle - cubic

def g_inverse(tower: BetaTower, index_window: Optional[str] = None) -> BetaTower:
    """
    Inverse in G_depth, computed as decompose(invert(tabulate(Φ(tower)))).

    The tabulation window is sized from the tower support so that the
    inverted table keeps every extracted index away from its edges.
    """
    depth = tower.depth
    support = tower.support_range()
    if support is None:
        return BetaTower.zero(depth)

    _product_index_range([tower], depth, index_window)
    lo, hi = support
    # inversion trims depth indices off the top of the table
    window = decomposition_window(lo - depth, hi + depth, depth)
    inverse_table = invert(tabulate(tower_morphism(tower), window))
    result = decompose(inverse_table, depth)
    if result.r != 0 or not result.alpha.is_one():
        raise ValidationError("Inverse of a tower automorphism left the Aut_* subgroup")
    return result.tower

# ============================================================================
# Action
# ============================================================================

def act(a: SemidirectElt, tower: BetaTower) -> BetaTower:
    """
    (α, r)·(β^(i)) = (α⁻¹⟨i⟩ β^(i)[-r]).

    This is the conjugation action (φ_αθ_r) Φ(B) (φ_αθ_r)⁻¹ read on towers.
    """
    inverse = a.alpha.inverse()
    return BetaTower(tuple(
        shift(level, -a.r).scaled(alpha_angle(inverse, i))
        for i, level in enumerate(tower.levels, start=1)
    ))
