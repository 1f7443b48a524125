"""``tlk``: command-line access to parsing, evaluation, translation and checking.

Exit status: 0 success / true / PASS, 1 false / FAIL, 2 usage or parse error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .equiv_checker import (
    SUITES, CheckConfig, Status, check_equiv, check_sentence_translation, run_law_suite,
)
from .finite_model import BudgetExceeded, Team, count_models, enumerate_models, load_model, load_team
from .formula_parser import ParseError, load_signature, parse_formula, parse_so, render
from .logic_ast import Fragment, FRAGMENT_ORDER, Signature, fragments_admitting, free_vars, fragment_of
from .normal_form import NormalFormError
from .so_eval import so_satisfies
from .team_eval import DEFAULT_BUDGET, DownwardClosureViolation, TruthValue, evaluator, truth_value
from .trace import TranslationTrace
from .translator import (
    TranslationError, d_sentence_to_id, eliminate_all_ivee, fo_to_id, pi11_to_id, sigma11_to_d,
    so_to_bid, so_to_id, so_to_ld,
)

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3

# route -> (translation, input is second order)
ROUTES = {
    "fo2id": (fo_to_id, False),
    "s112d": (sigma11_to_d, True),
    "d2id": (d_sentence_to_id, False),
    "pi112id": (pi11_to_id, True),
    "so2bid": (so_to_bid, True),
    "so2id": (so_to_id, True),
    "so2ld": (so_to_ld, True),
    "novee": (eliminate_all_ivee, False),
}

LOGICS = {"bid": Fragment.BID, "fo": Fragment.FO, "d": Fragment.D, "id": Fragment.ID,
          "ld": Fragment.LD, "so": None}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument handling


def _budget_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("budgets")
    g.add_argument("--max-team-rows", type=int, default=None, metavar="N",
                   help="largest assignment space M^vars an evaluation may build")
    g.add_argument("--max-models", type=int, default=None, metavar="N",
                   help="largest number of models per domain size")
    g.add_argument("--timeout-s", type=float, default=None, metavar="S")
    g.add_argument("--engine", choices=("maximal", "unprojected", "clauses"), default="maximal")
    g.add_argument("--paranoid", action="store_true", help="disable memoisation")
    return p


def _input_args(p: argparse.ArgumentParser, sig: bool = True):
    p.add_argument("-e", "--expr", help="formula text")
    p.add_argument("file", nargs="?", help="file holding the formula ('-' for stdin)")
    if sig:
        p.add_argument("--sig", help="signature JSON file")


def build_parser() -> argparse.ArgumentParser:
    budgets = _budget_parent()
    parser = argparse.ArgumentParser(prog="tlk", description="Team-semantics logic workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and report its fragment")
    p.add_argument("--logic", choices=sorted(LOGICS), default="bid")
    _input_args(p)

    p = sub.add_parser("eval", parents=[budgets], help="decide M |=_X phi")
    p.add_argument("-m", "--model", required=True, help="model JSON file")
    p.add_argument("-t", "--team", help="team JSON file (default: {∅} for sentences)")
    p.add_argument("--at-empty-team", action="store_true", help="evaluate at the empty team")
    p.add_argument("--logic", choices=("bid", "so"), default="bid")
    _input_args(p, sig=False)

    p = sub.add_parser("truthvalue", parents=[budgets], help="TRUE, EMPTY_ONLY or FALSE")
    p.add_argument("-m", "--model", required=True)
    _input_args(p, sig=False)

    p = sub.add_parser("translate", help="run a translation route")
    p.add_argument("--route", choices=sorted(ROUTES), required=True)
    p.add_argument("--trace", action="store_true", help="print every rewrite step first")
    _input_args(p)

    p = sub.add_parser("verify", parents=[budgets], help="check a translation by brute force")
    p.add_argument("--route", choices=sorted(ROUTES), required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--at-empty-team", action="store_true",
                   help="compare at the empty team instead of {∅}")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true", help="print the verdict as JSON")
    _input_args(p)

    p = sub.add_parser("laws", parents=[budgets], help="run a semantic law suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--sig", help="signature JSON file")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--formula", action="append", default=[],
                   help="extra formula to include (repeatable)")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("models", parents=[budgets], help="list every model of a signature")
    p.add_argument("--sig", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _formula_text(args) -> str:
    if (args.expr is None) == (args.file is None):
        raise UsageError("give exactly one of -e EXPR or FILE")
    return args.expr if args.expr is not None else _read(args.file)


def _signature(args) -> Signature | None:
    path = getattr(args, "sig", None)
    return None if path is None else load_signature(_read(path))


def _budget(args):
    budget = DEFAULT_BUDGET
    if args.max_team_rows is not None:
        n = args.max_team_rows
        budget = replace(budget, max_space_rows=n, max_subteam_rows=min(n, budget.max_subteam_rows),
                         max_team_space_rows=min(n, budget.max_team_space_rows))
    return replace(budget, timeout_s=args.timeout_s, paranoid=args.paranoid)


def _config(args) -> CheckConfig:
    cfg = CheckConfig(max_size=args.max_size, min_size=getattr(args, "min_size", 1),
                      engine=args.engine, budget=_budget(args), jobs=getattr(args, "jobs", 1))
    if args.max_models is not None:
        cfg = replace(cfg, max_models=args.max_models)
    return cfg


def _parse_input(text: str, second_order: bool, sig):
    return parse_so(text, sig) if second_order else parse_formula(text, sig)


# --------------------------------------------------------------------------
# commands


def cmd_parse(args, out) -> int:
    sig = _signature(args)
    logic = LOGICS[args.logic]
    phi = _parse_input(_formula_text(args), logic is None, sig)
    if logic is None:
        out.write(render(phi) + "\nlogic: SO\n")
        return OK
    admitted = fragments_admitting(phi)
    if logic not in admitted:
        raise UsageError(f"formula is not in {logic.value}; least fragment is {fragment_of(phi).value}")
    out.write(render(phi) + "\n")
    names = ", ".join(f.value for f in FRAGMENT_ORDER if f in admitted)
    out.write(f"fragment: {fragment_of(phi).value} (admitted by {names})\n")
    return OK


def cmd_eval(args, out) -> int:
    M = load_model(_read(args.model))
    text = _formula_text(args)
    if args.logic == "so":
        phi = parse_so(text, M.signature)
        if free_vars(phi):
            raise UsageError(f"free variables {sorted(free_vars(phi))}: give a sentence")
        result = so_satisfies(M, phi)
    else:
        phi = parse_formula(text, M.signature)
        if args.team is not None:
            team = load_team(_read(args.team), M)
        elif free_vars(phi):
            raise UsageError(f"free variables {sorted(free_vars(phi))}: give a team with -t")
        else:
            team = Team.empty() if args.at_empty_team else Team.unit()
        result = evaluator(M, _budget(args), args.engine).satisfies(team, phi)
    out.write(("true" if result else "false") + "\n")
    return OK if result else FALSE


def cmd_truthvalue(args, out) -> int:
    M = load_model(_read(args.model))
    phi = parse_formula(_formula_text(args), M.signature)
    value = truth_value(M, phi, _budget(args), args.engine)
    out.write(value.value + "\n")
    return OK if value is TruthValue.TRUE else FALSE


def _translate(args):
    fn, second_order = ROUTES[args.route]
    phi = _parse_input(_formula_text(args), second_order, _signature(args))
    trace = TranslationTrace()
    return phi, fn(phi, trace), trace


def cmd_translate(args, out) -> int:
    _, result, trace = _translate(args)
    if args.trace and len(trace):
        out.write(trace.render() + "\n")
    out.write(render(result) + "\n")
    return OK


def cmd_verify(args, out) -> int:
    phi, result, _ = _translate(args)
    cfg = _config(args)
    sig = _signature(args)
    if ROUTES[args.route][1]:
        at = "empty" if args.at_empty_team else "unit"
        if args.route == "so2ld" and at == "unit":
            print("note: the so2ld translation is meant for the empty team; see --at-empty-team",
                  file=sys.stderr)
        verdict = check_sentence_translation(phi, result, at, sig, config=cfg)
    else:
        verdict = check_equiv(phi, result, sig, config=cfg)
    out.write((json.dumps(verdict.to_json(), sort_keys=True) if args.json else verdict.to_text()) + "\n")
    return {Status.PASS: OK, Status.FAIL: FALSE, Status.BUDGET: BUDGET}[verdict.status]


def cmd_laws(args, out) -> int:
    sig = _signature(args)
    extra = [parse_formula(t, sig) for t in args.formula]
    report = run_law_suite(args.suite, sig, seed=args.seed, count=args.count, formulas=extra,
                           config=_config(args), depth=args.depth)
    out.write(report.render() + "\n")
    return {Status.PASS: OK, Status.FAIL: FALSE, Status.BUDGET: BUDGET}[report.status]


def cmd_models(args, out) -> int:
    sig = load_signature(_read(args.sig))
    if args.size < 1:
        raise UsageError("--size must be positive")
    if args.count_only:
        out.write(f"{count_models(sig, args.size)}\n")
        return OK
    budget = args.max_models if args.max_models is not None else CheckConfig().max_models
    for M in enumerate_models(sig, args.size, budget):
        out.write(M.to_text() + "\n")
    return OK


COMMANDS = {"parse": cmd_parse, "eval": cmd_eval, "truthvalue": cmd_truthvalue,
            "translate": cmd_translate, "verify": cmd_verify, "laws": cmd_laws,
            "models": cmd_models}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:       # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ParseError as exc:
        print(exc.pretty(), file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except DownwardClosureViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return FALSE
    except (UsageError, TranslationError, NormalFormError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
