"""
hq Verification Suites

This module contains the named, individually addressable verification suites:
- Hopf axioms over the symbolic field and at q = 2 and q = 1
- Primitive spaces
- Coalgebra-map certification of every generator family
- Graded automorphisms, filtration, level defects and conjugation
- The tower group law, truncation and the semidirect action
- Construct-then-decompose round trips

Every suite returns a SuiteReport whose cases are sorted by id. Every element a
suite produces for comparison is also pushed through render_element and
parse_element, and mismatches become failed cases.
"""

import time
import random
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Optional

# Import configuration
import config
from constants import VERIFY_SUITES
from expressions import parse_element, render_element
from groupkit import (
    AlphaSeq,
    BetaSeq,
    BetaTower,
    SemidirectElt,
    act,
    g_inverse,
    g_mul,
    g_mul_closed,
    semidirect_identity,
)
from halgebra import (
    Element,
    Window,
    antipode,
    antipode_by_extension,
    antipode_monomial,
    comultiply,
    counit,
    iterated_coproduct,
    multiply,
    primitive_space,
)
from morphisms import (
    Morphism,
    PhiBeta,
    TabulatedMorphism,
    compose,
    decompose,
    decomposition_window,
    identity,
    is_coalgebra_map,
    leading_coefficients,
    level_defect,
    phi_alpha,
    phi_beta,
    phi_beta_one_expansion,
    psi,
    realize,
    tabulate,
    theta,
    tower_morphism,
)
from qscalar import NUMERIC, GroundField, get_field, set_field, using_field
from validators import HQError, ValidationError, validate_suite_name

logger = logging.getLogger(__name__)

# ============================================================================
# Reports
# ============================================================================

@dataclass(frozen=True)
class CaseResult:
    case_id: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        return {"id": self.case_id, "passed": self.passed, "detail": self.detail}

@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [case for case in self.cases if not case.passed]

    def to_json(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": [case.to_json() for case in self.cases],
            "failed": len(self.failures),
            "elapsed": round(self.elapsed, 3),
        }

@dataclass(frozen=True)
class VerifyContext:
    """
    Parameters shared by every suite of one run.

    depth and trials cap the suites' own defaults when given.
    """
    window: Window
    seed: int = config.RNG_SEED
    depth: Optional[int] = None
    trials: Optional[int] = None

    def trial_count(self, default: int) -> int:
        return default if self.trials is None else max(1, min(default, self.trials))

    def depth_cap(self, default: int) -> int:
        return default if self.depth is None else max(1, min(default, self.depth))

    def rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.seed}:{suite}")

class _Recorder:
    """Collects cases and render round-trip witnesses for one suite."""

    def __init__(self, suite: str):
        self.suite = suite
        self.cases: list[CaseResult] = []
        self.witnessed = 0
        self.witness_failures: list[str] = []

    def check(self, case_id: str, passed: bool, detail: str = "") -> bool:
        self.cases.append(CaseResult(f"{self.suite}/{case_id}", bool(passed), "" if passed else detail))
        return bool(passed)

    def guard(self, case_id: str, run: Callable[[], tuple[bool, str]]) -> bool:
        try:
            passed, detail = run()
        except (HQError, ValidationError) as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        return self.check(case_id, passed, detail)

    def witness(self, *elements: Element) -> None:
        for element in elements:
            self.witnessed += 1
            text = render_element(element)
            if parse_element(text) != element and len(self.witness_failures) < 5:
                self.witness_failures.append(text)

    def witness_table(self, tab: TabulatedMorphism) -> None:
        self.witness(*tab.table.values())

    def report(self, elapsed: float) -> SuiteReport:
        field_label = str(get_field())
        self.check(
            f"render-roundtrip/{field_label}",
            not self.witness_failures,
            f"parse(render(a)) != a for: {'; '.join(self.witness_failures)}",
        )
        return SuiteReport(self.suite, sorted(self.cases, key=lambda case: case.case_id), elapsed)

# ============================================================================
# Random Parameters
# ============================================================================

def random_scalar(rng: random.Random, nonzero: bool = True) -> Fraction:
    bound = config.RANDOM_NUMERATOR_BOUND
    while True:
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if value or not nonzero:
            return value

def random_beta(rng: random.Random, support: tuple[int, int] = config.RANDOM_SUPPORT) -> BetaSeq:
    lo, hi = support
    return BetaSeq({n: random_scalar(rng) for n in range(lo, hi + 1) if rng.random() < 0.5})

def random_alpha(rng: random.Random, support: tuple[int, int] = config.RANDOM_SUPPORT) -> AlphaSeq:
    lo, hi = support
    return AlphaSeq({n: random_scalar(rng) for n in range(lo, hi + 1) if rng.random() < 0.5})

def random_tower(rng: random.Random, depth: int, support: tuple[int, int] = config.RANDOM_SUPPORT) -> BetaTower:
    return BetaTower(tuple(random_beta(rng, support) for _ in range(depth)))

def random_semidirect(rng: random.Random, r_bound: int = 2) -> SemidirectElt:
    return SemidirectElt(random_alpha(rng), rng.randint(-r_bound, r_bound))

def _first_difference(left: TabulatedMorphism, right: TabulatedMorphism) -> str:
    for key in sorted(set(left.table) | set(right.table)):
        if left.table.get(key) != right.table.get(key):
            return f"tables differ at x^{key[0]} y^{key[1]}"
    return ""

def _same_table(recorder: _Recorder, left: TabulatedMorphism, right: TabulatedMorphism) -> tuple[bool, str]:
    recorder.witness_table(left)
    detail = _first_difference(left, right)
    return not detail, detail

# ============================================================================
# Suites
# ============================================================================

def _hopf_axioms_on(recorder: _Recorder, ctx: VerifyContext, label: str) -> None:
    window = ctx.window
    failures: dict[str, list[tuple[int, int]]] = {
        "coassociativity": [], "counit": [], "antipode": [], "antipode-closed-form": [], "grading": [],
    }

    for n, m in window.monomials():
        a = Element.monomial(n, m)
        delta = comultiply(a)
        if iterated_coproduct(a, "left") != iterated_coproduct(a, "right"):
            failures["coassociativity"].append((n, m))
        if delta.left_counit() != a or delta.right_counit() != a:
            failures["counit"].append((n, m))
        unit = Element.constant(counit(a))
        if (delta.map_legs(antipode_monomial, Element.monomial).multiply_legs() != unit
                or delta.map_legs(Element.monomial, antipode_monomial).multiply_legs() != unit):
            failures["antipode"].append((n, m))
        s_a = antipode(a)
        if s_a != antipode_by_extension(a):
            failures["antipode-closed-form"].append((n, m))
        if any(left[1] + right[1] != m for left, right in delta.terms):
            failures["grading"].append((n, m))
        recorder.witness(s_a, delta.left_counit())

    for check, bad in failures.items():
        recorder.check(f"{label}/{check}", not bad, f"fails at {bad[:5]}")

    monomials = window.monomials()
    bad_products = []
    for (n1, m1), (n2, m2) in product(monomials, repeat=2):
        a, b = Element.monomial(n1, m1), Element.monomial(n2, m2)
        if comultiply(multiply(a, b)) != comultiply(a) * comultiply(b):
            bad_products.append(((n1, m1), (n2, m2)))
            if len(bad_products) >= 5:
                break
    recorder.check(f"{label}/coproduct-multiplicative", not bad_products, f"fails at {bad_products}")

    reduced = Window.parse(config.REDUCED_WINDOW).monomials()
    bad_triples = []
    for u, v, w in product(reduced, repeat=3):
        a, b, c = (Element.monomial(*key) for key in (u, v, w))
        if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
            bad_triples.append((u, v, w))
            break
    recorder.check(f"{label}/associativity", not bad_triples, f"fails at {bad_triples}")

def suite_hopf_axioms(ctx: VerifyContext, recorder: _Recorder) -> None:
    _hopf_axioms_on(recorder, ctx, str(get_field()))
    for q_value in (Fraction(2), Fraction(1)):
        numeric = GroundField(NUMERIC, q_value)
        with using_field(numeric):
            _hopf_axioms_on(recorder, ctx, str(numeric))

def suite_primitives(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = Window.parse(config.PRIMITIVE_WINDOW)
    one = Element.one()

    basis = primitive_space(1, window)
    expected = [Element.monomial(0, 1), Element.monomial(1, 0) - one]
    recorder.witness(*basis)
    recorder.check("m=1", basis == expected, f"got {[render_element(b) for b in basis]}")

    for m in (-2, 2, 3):
        basis = primitive_space(m, window)
        recorder.witness(*basis)
        recorder.check(f"m={m}", basis == [Element.monomial(m, 0) - one],
                       f"got {[render_element(b) for b in basis]}")

    basis = primitive_space(0, window)
    recorder.check("m=0", basis == [], f"got dimension {len(basis)}")

def suite_coalgebra_maps(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = ctx.window
    rng = ctx.rng("coalgebra-maps")

    for r in range(-3, 4):
        report = is_coalgebra_map(theta(r), window)
        recorder.check(f"theta/{r:+d}", report.passed, report.reason)

    for trial in range(ctx.trial_count(config.TRIALS_COALGEBRA_MAPS)):
        alpha = random_alpha(rng)
        report = is_coalgebra_map(phi_alpha(alpha), window)
        recorder.check(f"phi-alpha/{trial:02d}", report.passed, f"{report.reason} at {report.counterexample}")
        for s in (1, 2, 3):
            beta = random_beta(rng)
            morphism = phi_beta(s, beta)
            report = is_coalgebra_map(morphism, window)
            recorder.check(f"phi-beta-{s}/{trial:02d}", report.passed, f"{report.reason} at {report.counterexample}")
            recorder.witness(morphism.image(0, window.m_max))
            if s == 1:
                atom = PhiBeta(1, beta)
                mismatch = [key for key in window.monomials() if atom.image(*key) != phi_beta_one_expansion(beta, *key)]
                recorder.check(f"phi-beta-1-expansion/{trial:02d}", not mismatch, f"differs at {mismatch[:3]}")

    corrupted = tabulate(identity(), window)
    corrupted.table[(0, 1)] = Element.monomial(0, 2)
    report = is_coalgebra_map(corrupted)
    recorder.check("corrupted-map", not report.passed and report.counterexample == (0, 1),
                   f"expected failure at y, got {report.to_json()}")

def suite_graded_iso(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = ctx.window
    rng = ctx.rng("graded-iso")
    for trial in range(ctx.trial_count(config.TRIALS_GRADED_ISO)):
        alpha, other = random_alpha(rng), random_alpha(rng)

        def homomorphism() -> tuple[bool, str]:
            composite = tabulate(compose(phi_alpha(alpha), phi_alpha(other)), window)
            return _same_table(recorder, composite, tabulate(phi_alpha(alpha * other), window))
        recorder.guard(f"phi-alpha-product/{trial:02d}", homomorphism)

        a, b = random_semidirect(rng), random_semidirect(rng)

        def semidirect_law() -> tuple[bool, str]:
            composite = tabulate(compose(psi(a), psi(b)), window)
            return _same_table(recorder, composite, tabulate(psi(a * b), window))
        recorder.guard(f"psi-law/{trial:02d}", semidirect_law)

        def inverse_law() -> tuple[bool, str]:
            composite = tabulate(compose(psi(a), psi(a.inv())), window)
            return _same_table(recorder, composite, tabulate(identity(), window))
        recorder.guard(f"psi-inverse/{trial:02d}", inverse_law)

        graded = all(
            all(m_ == m for _, m_ in phi_alpha(alpha).image(n, m).terms)
            for n, m in window.monomials()
        )
        recorder.check(f"graded/{trial:02d}", graded, "phi_alpha moved a monomial out of its degree")

def _random_aut0_word(rng: random.Random) -> Morphism:
    pieces: list[Morphism] = []
    for _ in range(rng.randint(2, 4)):
        choice = rng.randrange(3)
        if choice == 0:
            pieces.append(phi_alpha(random_alpha(rng)))
        elif choice == 1:
            pieces.append(phi_beta(rng.randint(1, 3), random_beta(rng)))
        else:
            r = rng.randint(-2, 2)
            pieces.append(compose(theta(r), phi_beta(rng.randint(1, 3), random_beta(rng)), theta(-r)))
    return compose(*pieces)

def suite_filtration(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = ctx.window
    rng = ctx.rng("filtration")
    for trial in range(ctx.trial_count(config.TRIALS_FILTRATION)):
        word = _random_aut0_word(rng)

        def filtration() -> tuple[bool, str]:
            coefficients = leading_coefficients(word, window)
            for (n, m), c in coefficients.items():
                for i in range(1, m):
                    other = coefficients.get((n + i, m - i))
                    if other is not None and c != coefficients[(n, i)] * other:
                        return False, f"alpha_({n},{m}) is not alpha_({n},{i}) alpha_({n + i},{m - i})"
            recorder.witness(*(word.image(n, window.m_max) for n in window.x_range()))
            return True, ""
        recorder.guard(f"aut0-word/{trial:02d}", filtration)

def suite_f_homomorphisms(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = ctx.window
    rng = ctx.rng("f-homomorphisms")
    indices = window.x_range()
    for s in (1, 2, 3):
        for trial in range(ctx.trial_count(config.TRIALS_F_HOMOMORPHISMS)):
            beta, gamma = random_beta(rng), random_beta(rng)

            def additive() -> tuple[bool, str]:
                defect = level_defect(compose(phi_beta(s, beta), phi_beta(s, gamma)), s, indices)
                recorder.witness(compose(phi_beta(s, beta), phi_beta(s, gamma)).image(0, s))
                return defect == beta + gamma, f"defect {defect} != {beta + gamma}"
            recorder.guard(f"level-{s}/{trial:02d}", additive)

def suite_conjugation(ctx: VerifyContext, recorder: _Recorder) -> None:
    window = ctx.window
    rng = ctx.rng("conjugation")
    for s in (1, 2, 3):
        for trial in range(ctx.trial_count(config.TRIALS_CONJUGATION)):
            a, beta = random_semidirect(rng), random_beta(rng)

            def conjugate() -> tuple[bool, str]:
                outer = psi(a)
                conjugated = tabulate(compose(outer, phi_beta(s, beta), outer.inverse()), window)
                tower = BetaTower(tuple(beta if i == s else BetaSeq() for i in range(1, s + 1)))
                closed = tabulate(phi_beta(s, act(a, tower).level(s)), window)
                return _same_table(recorder, conjugated, closed)
            recorder.guard(f"level-{s}/{trial:02d}", conjugate)

def suite_g_law(ctx: VerifyContext, recorder: _Recorder) -> None:
    rng = ctx.rng("g-law")
    closed_depth = 3
    for trial in range(ctx.trial_count(config.TRIALS_G_LAW_CLOSED)):
        left, right = random_tower(rng, closed_depth), random_tower(rng, closed_depth)

        def closed_forms() -> tuple[bool, str]:
            product_ = g_mul(left, right)
            for level in (2, 3):
                closed = g_mul_closed(level, left, right)
                if product_.level(level) != closed:
                    return False, f"level {level}: recursion {product_.level(level)} != closed {closed}"
            return True, ""
        recorder.guard(f"closed-forms/{trial:02d}", closed_forms)

    depth = ctx.depth_cap(4)
    for trial in range(ctx.trial_count(config.TRIALS_G_LAW_ASSOCIATIVITY)):
        a, b, c = (random_tower(rng, depth) for _ in range(3))

        def associative() -> tuple[bool, str]:
            return g_mul(g_mul(a, b), c) == g_mul(a, g_mul(b, c)), "g_mul is not associative"
        recorder.guard(f"associativity/{trial:02d}", associative)

    for trial in range(max(1, ctx.trial_count(config.TRIALS_G_LAW_ASSOCIATIVITY) // 4)):
        tower = random_tower(rng, depth)
        zero = BetaTower.zero(depth)

        def identity_and_inverse() -> tuple[bool, str]:
            if g_mul(tower, zero) != tower or g_mul(zero, tower) != tower:
                return False, "zero tower is not a two-sided identity"
            inverse = g_inverse(tower)
            if not g_mul(tower, inverse).is_zero() or not g_mul(inverse, tower).is_zero():
                return False, f"g_inverse gave {inverse.to_json()}"
            return True, ""
        recorder.guard(f"identity-inverse/{trial:02d}", identity_and_inverse)

def suite_tower_consistency(ctx: VerifyContext, recorder: _Recorder) -> None:
    rng = ctx.rng("tower-consistency")
    depth = ctx.depth_cap(4)
    reduced = Window.parse(config.REDUCED_WINDOW)
    for trial in range(ctx.trial_count(config.TRIALS_TOWER_CONSISTENCY)):
        left, right = random_tower(rng, depth), random_tower(rng, depth)
        a, b = random_semidirect(rng), random_semidirect(rng)

        def truncation() -> tuple[bool, str]:
            full = g_mul(left, right)
            for j in range(1, depth):
                if full.truncate(j) != g_mul(left.truncate(j), right.truncate(j)):
                    return False, f"truncation to depth {j} is not a homomorphism"
            return True, ""
        recorder.guard(f"truncation/{trial:02d}", truncation)

        def action() -> tuple[bool, str]:
            if act(a * b, left) != act(a, act(b, left)):
                return False, "act is not a group action"
            if act(a, g_mul(left, right)) != g_mul(act(a, left), act(a, right)):
                return False, "act does not respect g_mul"
            if act(semidirect_identity(), left) != left:
                return False, "identity does not act trivially"
            return True, ""
        recorder.guard(f"action/{trial:02d}", action)

        recorder.check(f"semidirect-inverse/{trial:02d}", a * a.inv() == semidirect_identity()
                       and a.inv() * a == semidirect_identity(), "semidirect inverse law fails")

        def morphism_side() -> tuple[bool, str]:
            outer = psi(a)
            conjugated = tabulate(compose(outer, tower_morphism(left), outer.inverse()), reduced)
            return _same_table(recorder, conjugated, tabulate(tower_morphism(act(a, left)), reduced))
        recorder.guard(f"conjugation/{trial:02d}", morphism_side)

def suite_decompose_roundtrip(ctx: VerifyContext, recorder: _Recorder) -> None:
    rng = ctx.rng("decompose-roundtrip")
    max_depth = ctx.depth_cap(5)
    lo, hi = config.RANDOM_SUPPORT

    def identity_case() -> tuple[bool, str]:
        result = decompose(tabulate(identity(), decomposition_window(lo, hi, 2)), 2)
        ok = result.r == 0 and result.alpha.is_one() and result.tower.is_zero()
        return ok, f"identity decomposed as {result.to_json()}"
    recorder.guard("identity", identity_case)

    for trial in range(ctx.trial_count(config.TRIALS_DECOMPOSITION)):
        depth = rng.randint(1, max_depth)
        tower = random_tower(rng, depth)
        a = random_semidirect(rng)

        def roundtrip() -> tuple[bool, str]:
            table = tabulate(realize(tower, a), decomposition_window(lo, hi, depth, a.r))
            recorder.witness_table(table)
            result = decompose(table, depth)
            ok = result.r == a.r and result.alpha == a.alpha and result.tower == tower
            return ok, f"recovered {result.to_json()}"
        recorder.guard(f"depth-{depth}/{trial:02d}", roundtrip)

SUITES: dict[str, Callable[[VerifyContext, _Recorder], None]] = {
    "hopf-axioms": suite_hopf_axioms,
    "primitives": suite_primitives,
    "coalgebra-maps": suite_coalgebra_maps,
    "graded-iso": suite_graded_iso,
    "filtration": suite_filtration,
    "f-homomorphisms": suite_f_homomorphisms,
    "conjugation": suite_conjugation,
    "g-law": suite_g_law,
    "tower-consistency": suite_tower_consistency,
    "decompose-roundtrip": suite_decompose_roundtrip,
}

# ============================================================================
# Runners
# ============================================================================

def run_suite(name: str, ctx: VerifyContext) -> SuiteReport:
    """
    Run one named suite.

    Raises:
        SuiteNameError: If the suite is unknown
    """
    name = validate_suite_name(name)
    if name == "all":
        raise ValidationError("Use run_all for 'all'")

    logger.info(f"Running suite {name} on window {ctx.window} with seed {ctx.seed}")
    recorder = _Recorder(name)
    start = time.perf_counter()
    SUITES[name](ctx, recorder)
    report = recorder.report(time.perf_counter() - start)
    logger.info(f"Suite {name}: {len(report.cases) - len(report.failures)}/{len(report.cases)} cases passed in {report.elapsed:.2f}s")
    return report

def _init_worker(field_: GroundField) -> None:
    set_field(field_)

def run_all(ctx: VerifyContext, workers: int = 1, names: Optional[Iterable[str]] = None) -> list[SuiteReport]:
    """
    Run several suites (all by default), fanning out across processes when workers > 1.

    Reports come back in suite order regardless of scheduling.
    """
    names = list(names) if names is not None else list(VERIFY_SUITES)
    if workers <= 1 or len(names) <= 1:
        return [run_suite(name, ctx) for name in names]

    logger.info(f"Running {len(names)} suites on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(get_field(),)) as pool:
        reports = list(pool.map(run_suite, names, [ctx] * len(names)))
    return reports
