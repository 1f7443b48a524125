"""Team-semantics logic workbench.

BID-logic formulas (with the D, ID and LD fragments) are evaluated over
finite models and teams; second-order sentences are evaluated by brute
force and translated into team logics; :mod:`tlk.equiv_checker` compares
the two exhaustively on small models.
"""
from .finite_model import BudgetExceeded, Model, Team
from .formula_parser import ParseError, parse_formula, parse_so, render
from .logic_ast import Fragment, Signature, fragment_of, free_vars
from .team_eval import EvalBudget, TruthValue, satisfies, sentence_true, truth_value
from .so_eval import so_satisfies, so_sentence_true
from .equiv_checker import Status, check_equiv, check_sentence_translation, run_law_suite

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "Model", "Team", "ParseError", "parse_formula", "parse_so", "render",
    "Fragment", "Signature", "fragment_of", "free_vars", "EvalBudget", "TruthValue",
    "satisfies", "sentence_true", "truth_value", "so_satisfies", "so_sentence_true",
    "Status", "check_equiv", "check_sentence_translation", "run_law_suite",
]
