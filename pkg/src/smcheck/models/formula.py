"""BLTL abstract syntax: arithmetic expressions, formulas, bounds and queries.

Nodes are frozen dataclasses so formulas are immutable and safe to share between
concurrent evaluations.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union


class Verdict(str, Enum):
    """Three-valued outcome of evaluating a formula on a (possibly partial) trace."""

    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        """String representation."""
        return self.value

    @property
    def decided(self) -> bool:
        """Whether the verdict is final."""
        return self is not Verdict.INCONCLUSIVE

    @classmethod
    def of(cls, value: bool | None) -> "Verdict":
        """Convert a Kleene value (None = unknown) to a Verdict."""
        if value is None:
            return cls.INCONCLUSIVE
        return cls.TRUE if value else cls.FALSE


# Expressions


@dataclass(frozen=True)
class Var:
    """Reference to an observed variable."""

    name: str


@dataclass(frozen=True)
class Const:
    """Numeric constant (character literals are stored as their code point)."""

    value: int | float


@dataclass(frozen=True)
class BinOp:
    """Arithmetic operation: one of + - * /."""

    op: str
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Compare:
    """Comparison: one of = != < <= > >=. The only boolean-typed expression."""

    op: str
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Var, Const, BinOp, Compare]

ARITH_OPS = ("+", "-", "*", "/")
COMPARE_OPS = ("=", "!=", "<", "<=", ">", ">=")


# Bounds


@dataclass(frozen=True)
class Steps:
    """Bound counted in trace states."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"step bound must be non-negative, got {self.k}")

    def __str__(self) -> str:
        return f"#{self.k}"


@dataclass(frozen=True)
class Time:
    """Bound counted in model time units (kernel ticks), kept as an exact fraction."""

    d: Fraction

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ValueError(f"time bound must be non-negative, got {self.d}")

    def __str__(self) -> str:
        if self.d.denominator == 1:
            return str(self.d.numerator)
        return str(float(self.d))


Bound = Union[Steps, Time]


# Formulas


@dataclass(frozen=True)
class TrueF:
    """Constant true."""


@dataclass(frozen=True)
class FalseF:
    """Constant false."""


@dataclass(frozen=True)
class Atom:
    """Atomic proposition: a comparison, or a bare variable meaning ``var != 0``."""

    expr: Expr


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Until:
    """``lhs U<=bound rhs``."""

    lhs: "Formula"
    rhs: "Formula"
    bound: Bound


@dataclass(frozen=True)
class Eventually:
    """``F<=bound operand``, equivalent to ``true U<=bound operand``."""

    operand: "Formula"
    bound: Bound


@dataclass(frozen=True)
class Globally:
    """``G<=bound operand``, equivalent to ``!F<=bound !operand``."""

    operand: "Formula"
    bound: Bound


Formula = Union[TrueF, FalseF, Atom, Not, And, Or, Implies, Until, Eventually, Globally]


# Queries


@dataclass(frozen=True)
class Estimate:
    """``Pr(formula)``: estimate the satisfaction probability."""

    formula: Formula


@dataclass(frozen=True)
class Test:
    """``Pr>=theta(formula)``: test whether the probability is at least theta."""

    __test__ = False  # not a pytest test class

    formula: Formula
    theta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.theta}")


@dataclass(frozen=True)
class Mean:
    """``X<=T(var)``: mean value of a variable after T time units."""

    var: str
    horizon: Fraction

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError(f"mean horizon must be non-negative, got {self.horizon}")


Query = Union[Estimate, Test, Mean]


def expr_variables(expr: Expr) -> set[str]:
    """
    Collect the variable names used by an expression.

    Args:
        expr: Expression

    Returns:
        Set of variable names
    """
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Const):
        return set()
    return expr_variables(expr.lhs) | expr_variables(expr.rhs)


def formula_variables(formula: Formula) -> set[str]:
    """
    Collect the variable names used by a formula.

    Args:
        formula: Formula

    Returns:
        Set of variable names
    """
    if isinstance(formula, (TrueF, FalseF)):
        return set()
    if isinstance(formula, Atom):
        return expr_variables(formula.expr)
    if isinstance(formula, (Not, Eventually, Globally)):
        return formula_variables(formula.operand)
    return formula_variables(formula.lhs) | formula_variables(formula.rhs)


def format_expr(expr: Expr) -> str:
    """Render an expression back to concrete syntax (fully parenthesized)."""
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Compare):
        return f"{format_expr(expr.lhs)} {expr.op} {format_expr(expr.rhs)}"
    return f"({format_expr(expr.lhs)} {expr.op} {format_expr(expr.rhs)})"


def format_formula(formula: Formula) -> str:
    """
    Render a formula back to concrete syntax.

    The output re-parses to an equal AST.
    """
    if isinstance(formula, TrueF):
        return "true"
    if isinstance(formula, FalseF):
        return "false"
    if isinstance(formula, Atom):
        return f"({format_expr(formula.expr)})"
    if isinstance(formula, Not):
        return f"!{format_formula(formula.operand)}"
    if isinstance(formula, And):
        return f"({format_formula(formula.lhs)} & {format_formula(formula.rhs)})"
    if isinstance(formula, Or):
        return f"({format_formula(formula.lhs)} | {format_formula(formula.rhs)})"
    if isinstance(formula, Implies):
        return f"({format_formula(formula.lhs)} => {format_formula(formula.rhs)})"
    if isinstance(formula, Until):
        return (
            f"(({format_formula(formula.lhs)}) U<={formula.bound} "
            f"({format_formula(formula.rhs)}))"
        )
    if isinstance(formula, Eventually):
        return f"F<={formula.bound} {format_formula(formula.operand)}"
    return f"G<={formula.bound} {format_formula(formula.operand)}"


def format_query(query: Query) -> str:
    """Render a query back to concrete syntax."""
    if isinstance(query, Estimate):
        return f"Pr({format_formula(query.formula)})"
    if isinstance(query, Test):
        return f"Pr>={query.theta}({format_formula(query.formula)})"
    horizon = Time(query.horizon)
    return f"X<={horizon}({query.var})"
