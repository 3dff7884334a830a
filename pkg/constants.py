"""
hq Constants

This module contains package-wide constants including:
- Verification suite names and descriptions
- Rendering tokens for elements and tensors
- CLI exit codes
"""

# ============================================================================
# Verification Suites
# ============================================================================

VERIFY_SUITES: dict[str, str] = {
    "hopf-axioms": "Coassociativity, counit, multiplicativity of the coproduct and the antipode axiom on the window",
    "primitives": "Dimensions and bases of the (x^m, 1)-primitive spaces",
    "coalgebra-maps": "Every generator family is a coalgebra map; a corrupted map is caught",
    "graded-iso": "phi_alpha is a group isomorphism and Psi respects the semidirect law",
    "filtration": "Aut_0 words preserve the y-filtration with multiplicative leading coefficients",
    "f-homomorphisms": "Degree-s defects add under composition",
    "conjugation": "Conjugating phi^(s) by phi_alpha theta_r gives the closed-form level-s generator",
    "g-law": "Recursive tower product against the closed forms, associativity, identity and inverses",
    "tower-consistency": "Truncation is a homomorphism and the action is by group automorphisms",
    "decompose-roundtrip": "Construct, tabulate and decompose recovers every parameter",
}
"""Named verification suites, in run order"""

# ============================================================================
# Rendering
# ============================================================================

TENSOR_SEPARATOR: str = " (x) "
"""Separator between the two legs of a rendered tensor"""

ZERO_TEXT: str = "0"
"""Rendering of the zero element"""

# ============================================================================
# Exit Codes
# ============================================================================

EXIT_OK: int = 0
"""Command succeeded / suite passed"""

EXIT_VERIFY_FAILED: int = 1
"""A verification suite reported failures"""

EXIT_USER_ERROR: int = 2
"""Invalid input or a domain precondition was violated"""

EXIT_INTERNAL_ERROR: int = 3
"""Unexpected internal failure"""
