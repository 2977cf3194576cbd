"""Bounded linear temporal logic: parsing, horizons and trace evaluation."""

from smcheck.bltl.evaluator import EvaluationError, TraceEvaluator, eval_expr, evaluate
from smcheck.bltl.grammar import BltlError, FormulaSyntaxError, parse_formula, parse_query
from smcheck.bltl.horizon import Horizon, horizon

__all__ = [
    "BltlError",
    "EvaluationError",
    "FormulaSyntaxError",
    "Horizon",
    "TraceEvaluator",
    "eval_expr",
    "evaluate",
    "horizon",
    "parse_formula",
    "parse_query",
]
