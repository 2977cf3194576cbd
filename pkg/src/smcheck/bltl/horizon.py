"""Simulation horizon of a formula: how far a trace must reach to decide it."""

from fractions import Fraction
from typing import NamedTuple

from smcheck.models.formula import (
    Atom,
    Eventually,
    FalseF,
    Formula,
    Globally,
    Not,
    Steps,
    TrueF,
    Until,
)


class Horizon(NamedTuple):
    """Nested-bound sums, in trace states and in time units."""

    steps: int
    time: Fraction

    def __add__(self, other: object) -> "Horizon":  # type: ignore[override]
        if not isinstance(other, Horizon):
            return NotImplemented
        return Horizon(self.steps + other.steps, self.time + other.time)

    def join(self, other: "Horizon") -> "Horizon":
        """Componentwise maximum."""
        return Horizon(max(self.steps, other.steps), max(self.time, other.time))


ZERO = Horizon(0, Fraction(0))


def horizon(formula: Formula) -> Horizon:
    """
    Compute the horizon of a formula.

    A step bound adds to the step component and a time bound to the time component of
    the componentwise maximum of the operands' horizons. Atoms and constants have (0, 0).

    Args:
        formula: Formula AST

    Returns:
        Horizon (steps, time)
    """
    if isinstance(formula, (TrueF, FalseF, Atom)):
        return ZERO
    if isinstance(formula, Not):
        return horizon(formula.operand)
    if isinstance(formula, (Eventually, Globally)):
        inner = horizon(formula.operand)
        bound = formula.bound
    elif isinstance(formula, Until):
        inner = horizon(formula.lhs).join(horizon(formula.rhs))
        bound = formula.bound
    else:
        return horizon(formula.lhs).join(horizon(formula.rhs))
    if isinstance(bound, Steps):
        return inner + Horizon(bound.k, Fraction(0))
    return inner + Horizon(0, bound.d)
