"""
hq Command Line

This module contains the `hq` command surface including:
- Element commands: eval, mul, delta, counit, antipode, primitives
- Morphism commands: apply, compose, tabulate, check, invert, decompose
- Group commands: mul, act, inverse
- verify, running the named suites
"""

import sys
import json
import argparse
import logging
from dataclasses import dataclass
from typing import Any, Optional

# Import configuration
import config
from config import Settings, load_config_file, resolve_settings
from constants import EXIT_OK, EXIT_VERIFY_FAILED, VERIFY_SUITES
from error_handling import configure_logging, format_failure_report, get_user_friendly_error_message
from expressions import parse_element, render_element, render_monomial, render_scalar, render_tensor
from groupkit import BetaTower, SemidirectElt, act, g_inverse, g_mul, g_mul_closed
from halgebra import Window, antipode, comultiply, counit, multiply, primitive_space
from morphisms import (
    Morphism,
    TabulatedMorphism,
    apply,
    compose,
    decompose,
    is_coalgebra_map,
    invert,
    tabulate,
)
from qscalar import configure_field, get_field
from utils import load_json_argument, save_json_atomic
from validators import ValidationError, validate_depth, validate_suite_name
from verification import VerifyContext, run_all

logger = logging.getLogger(__name__)

@dataclass
class Outcome:
    """What a command prints (text or JSON) and its exit code."""
    text: str
    payload: Any
    exit_code: int = EXIT_OK

# ============================================================================
# Element Commands
# ============================================================================

def cmd_eval(args: argparse.Namespace, settings: Settings) -> Outcome:
    element = parse_element(args.expr)
    return Outcome(render_element(element), element.to_json())

def cmd_mul(args: argparse.Namespace, settings: Settings) -> Outcome:
    result = multiply(parse_element(args.left), parse_element(args.right))
    return Outcome(render_element(result), result.to_json())

def cmd_delta(args: argparse.Namespace, settings: Settings) -> Outcome:
    result = comultiply(parse_element(args.expr))
    return Outcome(render_tensor(result), result.to_json())

def cmd_counit(args: argparse.Namespace, settings: Settings) -> Outcome:
    value = counit(parse_element(args.expr))
    return Outcome(render_scalar(value), get_field().to_json(value))

def cmd_antipode(args: argparse.Namespace, settings: Settings) -> Outcome:
    result = antipode(parse_element(args.expr))
    return Outcome(render_element(result), result.to_json())

def cmd_primitives(args: argparse.Namespace, settings: Settings) -> Outcome:
    window = Window.parse(args.window or config.PRIMITIVE_WINDOW)
    basis = primitive_space(args.m, window, base=args.base)
    lines = [f"dimension {len(basis)}"] + [render_element(b) for b in basis]
    payload = {"m": args.m, "base": args.base, "window": window.to_json(),
               "dimension": len(basis), "basis": [b.to_json() for b in basis]}
    return Outcome("\n".join(lines), payload)

# ============================================================================
# Morphism Commands
# ============================================================================

def _table_text(tab: TabulatedMorphism) -> str:
    lines = [f"window {tab.window}"]
    for (n, m), image in sorted(tab.table.items(), key=lambda item: (item[0][1], item[0][0])):
        lines.append(f"{render_monomial(n, m)} -> {render_element(image)}")
    return "\n".join(lines)

def _load_morphism(text: str) -> Morphism:
    return Morphism.from_json(load_json_argument(text))

def _load_table(args: argparse.Namespace, settings: Settings) -> TabulatedMorphism:
    if args.table:
        return TabulatedMorphism.from_json(load_json_argument(args.table))
    if args.morph:
        return tabulate(_load_morphism(args.morph[0]), Window.parse(settings.window))
    raise ValidationError("Give --table or --morph")

def cmd_morph(args: argparse.Namespace, settings: Settings) -> Outcome:
    action = args.action

    if action == "apply":
        if not args.morph or args.expr is None:
            raise ValidationError("morph apply needs --morph and --expr")
        result = apply(_load_morphism(args.morph[0]), parse_element(args.expr))
        return Outcome(render_element(result), result.to_json())

    if action == "compose":
        if not args.morph:
            raise ValidationError("morph compose needs at least one --morph")
        result = compose(*(_load_morphism(text) for text in args.morph))
        payload = result.to_json()
        return Outcome(json.dumps(payload, sort_keys=True), payload)

    if action == "tabulate":
        if not args.morph:
            raise ValidationError("morph tabulate needs --morph")
        tab = tabulate(_load_morphism(args.morph[0]), Window.parse(settings.window))
        return Outcome(_table_text(tab), tab.to_json())

    if action == "check":
        if args.table:
            report = is_coalgebra_map(TabulatedMorphism.from_json(load_json_argument(args.table)))
        elif args.morph:
            report = is_coalgebra_map(_load_morphism(args.morph[0]), Window.parse(settings.window))
        else:
            raise ValidationError("morph check needs --morph or --table")
        if report.passed:
            text = f"coalgebra map: pass ({report.checked} monomials checked)"
            if report.unverified:
                text += f"; {report.unverified} unverified, their forced images outside the table are undetermined"
        else:
            n, m = report.counterexample
            text = f"coalgebra map: fail at {render_monomial(n, m)} ({report.reason})"
        return Outcome(text, report.to_json(), EXIT_OK if report.passed else EXIT_VERIFY_FAILED)

    if action == "invert":
        target = Window.parse(args.target) if args.target else None
        inverse = invert(_load_table(args, settings), target)
        return Outcome(_table_text(inverse), inverse.to_json())

    # decompose
    depth = validate_depth(args.depth if args.depth is not None else settings.depth)
    result = decompose(_load_table(args, settings), depth)
    lines = [f"r = {result.r}",
             "alpha = " + (", ".join(f"{n}: {render_scalar(c)}" for n, c in result.alpha.items()) or "1")]
    for i, level in enumerate(result.tower.levels, start=1):
        values = ", ".join(f"{n}: {render_scalar(c)}" for n, c in level.items()) or "0"
        lines.append(f"beta^({i}) = {values}")
    return Outcome("\n".join(lines), result.to_json())

# ============================================================================
# Group Commands
# ============================================================================

def _tower_text(tower: BetaTower) -> str:
    lines = []
    for i, level in enumerate(tower.levels, start=1):
        values = ", ".join(f"{n}: {render_scalar(c)}" for n, c in level.items()) or "0"
        lines.append(f"level {i}: {values}")
    return "\n".join(lines)

def cmd_group(args: argparse.Namespace, settings: Settings) -> Outcome:
    action = args.action

    if action == "mul":
        if args.left is None or args.right is None:
            raise ValidationError("group mul needs --left and --right")
        depth = validate_depth(args.depth if args.depth is not None else settings.depth)
        left = BetaTower.from_json(load_json_argument(args.left)).padded(depth).truncate(depth)
        right = BetaTower.from_json(load_json_argument(args.right)).padded(depth).truncate(depth)
        if args.closed:
            product = g_mul(left.truncate(1), right.truncate(1), index_window=settings.index_window)
            levels = list(product.levels)
            for level in range(2, depth + 1):
                if level > 3:
                    raise ValidationError("--closed covers levels 2 and 3 only; use depth <= 3")
                levels.append(g_mul_closed(level, left, right))
            result = BetaTower(tuple(levels))
        else:
            result = g_mul(left, right, index_window=settings.index_window)
        return Outcome(_tower_text(result), result.to_json())

    if action == "act":
        if args.elt is None or args.tower is None:
            raise ValidationError("group act needs --elt and --tower")
        result = act(SemidirectElt.from_json(load_json_argument(args.elt)),
                     BetaTower.from_json(load_json_argument(args.tower)))
        return Outcome(_tower_text(result), result.to_json())

    # inverse
    if args.tower is None:
        raise ValidationError("group inverse needs --tower")
    result = g_inverse(BetaTower.from_json(load_json_argument(args.tower)), index_window=settings.index_window)
    return Outcome(_tower_text(result), result.to_json())

# ============================================================================
# Verify Command
# ============================================================================

def cmd_verify(args: argparse.Namespace, settings: Settings) -> Outcome:
    suite = validate_suite_name(args.suite)
    names = list(VERIFY_SUITES) if suite == "all" else [suite]
    ctx = VerifyContext(
        window=Window.parse(settings.window),
        seed=settings.seed,
        depth=args.depth,
        trials=args.trials,
    )
    reports = run_all(ctx, workers=settings.workers, names=names)

    lines = []
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        lines.append(f"{status} {report.suite} ({len(report.cases)} cases, {report.elapsed:.1f}s)")
        for case in report.failures:
            lines.append(f"  {case.case_id}: {case.detail}")

    passed = all(report.passed for report in reports)
    if not passed:
        lines.append(format_failure_report(reports))
    payload = {"passed": passed, "suites": [report.to_json() for report in reports]}
    return Outcome("\n".join(lines), payload, EXIT_OK if passed else EXIT_VERIFY_FAILED)

# ============================================================================
# Parser
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hq", description="Exact computations in H = k_q[x, x^-1, y] and its coalgebra automorphisms")
    parser.add_argument("--json", action="store_true", help="Print JSON instead of text")
    parser.add_argument("--config", default=None, help=f"JSON config file (default {config.CONFIG_FILE_PATH})")
    parser.add_argument("--field", choices=config.FIELD_MODES, default=None, help="Ground field mode")
    parser.add_argument("--q", default=None, help="Value of q in numeric mode, p or p/r")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--quiet", action="store_true", help="Log errors only")
    parser.add_argument("--output", default=None, help="Also write the JSON result to this file")

    commands = parser.add_subparsers(dest="command", required=True)

    for name, handler, help_text in (
        ("eval", cmd_eval, "Parse and normalize an element"),
        ("delta", cmd_delta, "Coproduct of an element"),
        ("counit", cmd_counit, "Counit of an element"),
        ("antipode", cmd_antipode, "Antipode of an element"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("expr")
        sub.set_defaults(handler=handler)

    sub = commands.add_parser("mul", help="Product of two elements")
    sub.add_argument("left")
    sub.add_argument("right")
    sub.set_defaults(handler=cmd_mul)

    sub = commands.add_parser("primitives", help="Basis of the (x^m, x^base)-primitive space")
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--base", type=int, default=0)
    sub.add_argument("--window", default=None, help=f"nlo,nhi,mmax (default {config.PRIMITIVE_WINDOW})")
    sub.set_defaults(handler=cmd_primitives)

    sub = commands.add_parser("morph", help="Morphism words and tabulated maps")
    sub.add_argument("action", choices=("apply", "compose", "tabulate", "check", "invert", "decompose"))
    sub.add_argument("--morph", action="append", default=None, help="Morphism JSON or @file (repeat for compose)")
    sub.add_argument("--table", default=None, help="Tabulated morphism JSON or @file")
    sub.add_argument("--expr", default=None, help="Element for apply")
    sub.add_argument("--window", default=None, help="nlo,nhi,mmax used for tabulation")
    sub.add_argument("--target", default=None, help="Window every inverse entry must cover")
    sub.add_argument("--depth", type=int, default=None)
    sub.set_defaults(handler=cmd_morph)

    sub = commands.add_parser("group", help="Tower group G_i and the semidirect action")
    sub.add_argument("action", choices=("mul", "act", "inverse"))
    sub.add_argument("--depth", type=int, default=None)
    sub.add_argument("--left", default=None)
    sub.add_argument("--right", default=None)
    sub.add_argument("--closed", action="store_true", help="Use the closed forms at levels 2 and 3")
    sub.add_argument("--elt", default=None, help="SemidirectElt JSON")
    sub.add_argument("--tower", default=None, help="BetaTower JSON")
    sub.set_defaults(handler=cmd_group)

    sub = commands.add_parser("verify", help="Run a named verification suite")
    sub.add_argument("suite", help=f"One of {', '.join(list(VERIFY_SUITES) + ['all'])}")
    sub.add_argument("--window", default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--depth", type=int, default=None, help="Cap on tower depths drawn by the suites")
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--trials", type=int, default=None, help="Cap on randomized trials per check")
    sub.set_defaults(handler=cmd_verify)

    return parser

def _emit(outcome: Outcome, as_json: bool, output: Optional[str]) -> None:
    if as_json:
        print(json.dumps(outcome.payload, indent=2, sort_keys=True))
    else:
        print(outcome.text)
    if output:
        save_json_atomic(output, outcome.payload)

def main(argv: Optional[list[str]] = None) -> int:
    """
    Run one hq command.

    Returns:
        Exit code: 0 success, 1 verification failure, 2 user or domain error,
        3 internal error
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else "ERROR" if args.quiet else None)

    try:
        overrides = {
            "field_mode": args.field,
            "field_q": args.q,
            "window": getattr(args, "window", None) if args.command in ("morph", "verify") else None,
            "seed": getattr(args, "seed", None),
            "workers": getattr(args, "workers", None),
        }
        if args.q is not None and args.field is None:
            overrides["field_mode"] = "numeric"
        settings = resolve_settings(load_config_file(args.config), overrides)
        configure_field(settings.field_mode, settings.field_q)
        logger.info(f"Running {args.command} over {get_field()}")
        outcome = args.handler(args, settings)
        _emit(outcome, args.json, args.output)
    except Exception as e:
        message, code = get_user_friendly_error_message(e)
        print(message, file=sys.stderr)
        return code

    return outcome.exit_code

if __name__ == "__main__":
    sys.exit(main())
