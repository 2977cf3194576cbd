"""BLTL and query parsing.

The grammar (prefix ``!``, ``G`` and ``F`` and infix ``U`` bind tightest; then ``&``; then
``|``; then right-associative ``=>``)::

    query   = "Pr" "(" formula ")" | "Pr" ">=" REAL "(" formula ")" | "X" "<=" bound "(" IDENT ")" | formula
    formula = impl ; impl = or { "=>" impl } ; or = and { "|" and } ; and = unary { "&" unary }
    unary   = "!" unary | "G" "<=" bound unary | "F" "<=" bound unary | primary [ "U" "<=" bound unary ]
    primary = "true" | "false" | atom | "(" formula ")"
    bound   = "#" NAT | REAL ;  atom = expr CMP expr | IDENT
    expr    = term { ("+"|"-") term } ; term = factor { ("*"|"/") factor }
    factor  = IDENT | NUMBER | CHARLIT | "(" expr ")"

A bare formula as a query estimates its probability, like ``Pr(formula)``.
``U`` nests to the right: ``a U<=1 b U<=2 c`` reads ``a U<=1 (b U<=2 c)``, and its left
operand is a primary, so ``!a U<=1 b`` needs parentheses to mean ``(!a) U<=1 b``.

A bare ``IDENT`` atom means ``IDENT != 0`` so boolean probe and flag variables such as
``div:entry`` can be used directly. Character literals denote their code point.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Any

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from smcheck.models.formula import (
    And,
    Atom,
    BinOp,
    Compare,
    Const,
    Estimate,
    Eventually,
    Expr,
    FalseF,
    Formula,
    Globally,
    Implies,
    Mean,
    Not,
    Or,
    Query,
    Steps,
    Test,
    Time,
    TrueF,
    Until,
    Var,
)


class BltlError(Exception):
    """Base class for formula errors."""

    pass


class FormulaSyntaxError(BltlError):
    """Formula text does not match the grammar."""

    def __init__(self, message: str, line: int = -1, column: int = -1) -> None:
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line > 0 else ""
        super().__init__(f"{message}{where}")


GRAMMAR = r"""
    ?formula: impl

    ?impl: or_
         | or_ "=>" impl              -> implies

    ?or_: and_
        | or_ "|" and_                -> or_f

    ?and_: unary
         | and_ "&" unary             -> and_f

    ?unary: "!" unary                 -> not_f
          | "G" "<=" bound unary      -> globally
          | "F" "<=" bound unary      -> eventually
          | primary "U" "<=" bound unary -> until
          | primary

    ?primary: "true"                  -> true_f
            | "false"                 -> false_f
            | expr cmp expr           -> compare_atom
            | IDENT                   -> bool_atom
            | "(" formula ")"

    bound: "#" NUMBER                 -> step_bound
         | NUMBER                     -> time_bound

    !cmp: "=" | "!=" | "<" | "<=" | ">" | ">="

    ?expr: term
         | expr "+" term              -> add
         | expr "-" term              -> sub

    ?term: factor
         | term "*" factor            -> mul
         | term "/" factor            -> div

    ?factor: IDENT                    -> var
           | NUMBER                   -> number
           | CHARLIT                  -> char
           | "(" expr ")"

    query: "Pr" "(" formula ")"                  -> estimate
         | "Pr" ">=" NUMBER "(" formula ")"      -> test
         | "X" "<=" bound "(" IDENT ")"          -> mean
         | formula                                -> estimate

    IDENT: /[A-Za-z_][A-Za-z0-9_]*(:[A-Za-z0-9_]+)?/
    NUMBER: /\d+(\.\d+)?([eE][-+]?\d+)?/
    CHARLIT: /'[^'\\]'/

    %import common.WS
    %ignore WS
"""


def _number(token: Token) -> int | float:
    text = str(token)
    if any(c in text for c in ".eE"):
        return float(text)
    return int(text)


@v_args(inline=True)
class _AstBuilder(Transformer):  # type: ignore[misc]
    """Turn the lark parse tree into formula AST nodes."""

    def implies(self, lhs: Formula, rhs: Formula) -> Formula:
        return Implies(lhs, rhs)

    def or_f(self, lhs: Formula, rhs: Formula) -> Formula:
        return Or(lhs, rhs)

    def and_f(self, lhs: Formula, rhs: Formula) -> Formula:
        return And(lhs, rhs)

    def not_f(self, operand: Formula) -> Formula:
        return Not(operand)

    def globally(self, bound: Any, operand: Formula) -> Formula:
        return Globally(operand, bound)

    def eventually(self, bound: Any, operand: Formula) -> Formula:
        return Eventually(operand, bound)

    def until(self, lhs: Formula, bound: Any, rhs: Formula) -> Formula:
        return Until(lhs, rhs, bound)

    def true_f(self) -> Formula:
        return TrueF()

    def false_f(self) -> Formula:
        return FalseF()

    def compare_atom(self, lhs: Expr, op: str, rhs: Expr) -> Formula:
        return Atom(Compare(op, lhs, rhs))

    def bool_atom(self, name: Token) -> Formula:
        return Atom(Var(str(name)))

    def cmp(self, token: Token) -> str:
        return str(token)

    def step_bound(self, token: Token) -> Steps:
        value = _number(token)
        if not isinstance(value, int):
            raise FormulaSyntaxError(f"step bound must be a natural number, got {token}")
        return Steps(value)

    def time_bound(self, token: Token) -> Time:
        return Time(Fraction(str(token)))

    def add(self, lhs: Expr, rhs: Expr) -> Expr:
        return BinOp("+", lhs, rhs)

    def sub(self, lhs: Expr, rhs: Expr) -> Expr:
        return BinOp("-", lhs, rhs)

    def mul(self, lhs: Expr, rhs: Expr) -> Expr:
        return BinOp("*", lhs, rhs)

    def div(self, lhs: Expr, rhs: Expr) -> Expr:
        return BinOp("/", lhs, rhs)

    def var(self, name: Token) -> Expr:
        return Var(str(name))

    def number(self, token: Token) -> Expr:
        return Const(_number(token))

    def char(self, token: Token) -> Expr:
        return Const(ord(str(token)[1]))

    def estimate(self, formula: Formula) -> Query:
        return Estimate(formula)

    def test(self, theta: Token, formula: Formula) -> Query:
        value = float(str(theta))
        if not 0 < value < 1:
            raise FormulaSyntaxError(f"threshold must lie strictly between 0 and 1, got {theta}")
        return Test(formula, value)

    def mean(self, bound: Any, name: Token) -> Query:
        if isinstance(bound, Steps):
            raise FormulaSyntaxError("mean queries take a time bound, not a step bound")
        return Mean(str(name), bound.d)


@lru_cache(maxsize=1)
def _parser() -> Lark:
    # Earley resolves the "(" formula ")" versus "(" expr ")" choice without lookahead limits
    return Lark(GRAMMAR, start=["formula", "query"], parser="earley", lexer="basic")


def _parse(text: str, start: str) -> Any:
    try:
        tree = _parser().parse(text, start=start)
        return _AstBuilder().transform(tree)
    except UnexpectedEOF as e:
        raise FormulaSyntaxError(f"unexpected end of input in {text!r}") from e
    except UnexpectedInput as e:
        raise FormulaSyntaxError(
            f"unexpected input in {text!r}", line=e.line, column=e.column
        ) from e
    except VisitError as e:
        if isinstance(e.orig_exc, BltlError):
            raise e.orig_exc from e
        raise FormulaSyntaxError(str(e.orig_exc)) from e


def parse_formula(text: str) -> Formula:
    """
    Parse BLTL formula text.

    Args:
        text: Formula source, whitespace-insensitive

    Returns:
        Formula AST

    Raises:
        FormulaSyntaxError: If the text does not match the grammar (with line/column)
        FormulaSyntaxError: Also for semantic problems such as a fractional step bound
    """
    result: Formula = _parse(text, "formula")
    return result


def parse_query(text: str) -> Query:
    """
    Parse a query of the form ``Pr(f)``, ``Pr>=theta(f)``, ``X<=T(var)`` or a bare ``f``.

    Raises:
        FormulaSyntaxError: If the text does not match the grammar
        FormulaSyntaxError: Also for thresholds outside (0, 1) and step-bounded means
    """
    result: Query = _parse(text, "query")
    return result
