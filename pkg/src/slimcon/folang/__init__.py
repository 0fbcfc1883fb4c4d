"""First-order logic with equality over finite structures."""
from .evaluator import Evaluator, evaluate
from .library import BUILTINS, FREE_VARIABLES, builtin
from .parser import parse, parse_term
from .separation import SeparationReport, separation_report
from .syntax import (
    And,
    App,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Rel,
    Var,
    free_vars,
    is_sentence,
    pretty,
    quantifier_depth,
)

__all__ = [
    "And",
    "App",
    "BUILTINS",
    "Eq",
    "Evaluator",
    "Exists",
    "FREE_VARIABLES",
    "Forall",
    "Formula",
    "Implies",
    "Not",
    "Or",
    "Rel",
    "SeparationReport",
    "Var",
    "builtin",
    "evaluate",
    "free_vars",
    "is_sentence",
    "parse",
    "parse_term",
    "pretty",
    "quantifier_depth",
    "separation_report",
]
