"""Three-valued BLTL evaluation over finite timed traces.

Values are Kleene booleans: True, False, or None for "not forced by the states seen so far".
None only arises on traces that may still grow. Decided values never change when the trace
is extended, so :class:`TraceEvaluator` memoizes them and resumes bounded-until scans from
the first position that is not yet known to keep the window open.
"""

import math
from collections.abc import Callable

from smcheck.bltl.grammar import BltlError
from smcheck.models.formula import (
    And,
    Atom,
    BinOp,
    Compare,
    Const,
    Eventually,
    Expr,
    FalseF,
    Formula,
    Globally,
    Implies,
    Not,
    Or,
    Steps,
    TrueF,
    Until,
    Var,
    Verdict,
    formula_variables,
)
from smcheck.models.trace import TimedState, Trace, Value, VarRegistry

Kleene = bool | None
RowFn = Callable[[tuple[Value, ...]], Value]


class EvaluationError(BltlError):
    """A formula cannot be evaluated on a trace (unbound variable, division by zero)."""

    pass


_COMPARE: dict[str, Callable[[Value, Value], bool]] = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _divide(a: Value, b: Value) -> Value:
    if b == 0:
        raise EvaluationError(f"division by zero ({a} / {b})")
    return a / b


_ARITH: dict[str, Callable[[Value, Value], Value]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _divide,
}


def compile_expr(expr: Expr, registry: VarRegistry) -> RowFn:
    """
    Compile an expression into a function of a state's value tuple.

    Args:
        expr: Expression AST
        registry: Registry the value tuples follow

    Returns:
        Function mapping a value tuple to a number or boolean

    Raises:
        EvaluationError: If a variable is not in the registry
    """
    if isinstance(expr, Var):
        if expr.name not in registry:
            raise EvaluationError(f"unbound variable: {expr.name}")
        position = registry.index(expr.name)
        return lambda row: row[position]
    if isinstance(expr, Const):
        constant = expr.value
        return lambda row: constant
    lhs = compile_expr(expr.lhs, registry)
    rhs = compile_expr(expr.rhs, registry)
    op = _COMPARE[expr.op] if isinstance(expr, Compare) else _ARITH[expr.op]
    return lambda row: op(lhs(row), rhs(row))


def eval_expr(expr: Expr, state: TimedState) -> Value:
    """
    Evaluate an expression in one state.

    Args:
        expr: Expression AST
        state: State binding every variable of the expression

    Returns:
        Number for arithmetic expressions, bool for comparisons

    Raises:
        EvaluationError: On an unbound variable or division by zero
    """
    return compile_expr(expr, state.registry)(state.values)


def atom_holds(expr: Expr, value: Value) -> bool:
    """Truth of an atom given its expression value (a bare variable means ``!= 0``)."""
    if isinstance(expr, Compare):
        return bool(value)
    return value != 0


def _not(a: Kleene) -> Kleene:
    return None if a is None else not a


def _and(a: Kleene, b: Kleene) -> Kleene:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


class TraceEvaluator:
    """Incremental evaluator of one formula against one growing trace.

    The evaluator keeps references to the trace's storage, so states appended after
    construction are visible to later calls of :meth:`value`.
    """

    def __init__(self, formula: Formula, trace: Trace, complete: bool | None = None) -> None:
        """
        Initialize the evaluator.

        Args:
            formula: Formula to evaluate
            trace: Trace to evaluate on
            complete: Override the trace's own completeness flag

        Raises:
            EvaluationError: If the formula mentions a variable the trace does not record
        """
        missing = sorted(formula_variables(formula) - set(trace.registry.names))
        if missing:
            raise EvaluationError(f"unbound variable(s): {', '.join(missing)}")
        self.formula = formula
        self.trace = trace
        self._complete = complete
        self._root = self._compile(formula)

    @property
    def complete(self) -> bool:
        if self._complete is not None:
            return self._complete
        return self.trace.complete

    def value(self, k: int = 0) -> Kleene:
        """
        Kleene value of the formula at position k.

        Raises:
            EvaluationError: If k is beyond a complete trace, or evaluation fails
        """
        if k < 0:
            raise EvaluationError(f"negative start index: {k}")
        if k >= len(self.trace):
            if self.complete:
                raise EvaluationError(f"start index {k} beyond trace of length {len(self.trace)}")
            return None
        return self._root(k)

    def verdict(self, k: int = 0) -> Verdict:
        """Verdict of the formula at position k."""
        return Verdict.of(self.value(k))

    def _compile(self, f: Formula) -> Callable[[int], Kleene]:
        if isinstance(f, TrueF):
            return lambda k: True
        if isinstance(f, FalseF):
            return lambda k: False
        if isinstance(f, Atom):
            return self._atom(f)
        if isinstance(f, Not):
            operand = self._compile(f.operand)
            return lambda k: _not(operand(k))
        if isinstance(f, And):
            lhs, rhs = self._compile(f.lhs), self._compile(f.rhs)

            def conj(k: int) -> Kleene:
                a = lhs(k)
                return False if a is False else _and(a, rhs(k))

            return conj
        if isinstance(f, (Or, Implies)):
            lhs, rhs = self._compile(f.lhs), self._compile(f.rhs)
            negate = isinstance(f, Implies)

            def disj(k: int) -> Kleene:
                a = lhs(k)
                if negate:
                    a = _not(a)
                return True if a is True else _not(_and(_not(a), _not(rhs(k))))

            return disj
        if isinstance(f, Until):
            return self._until(self._compile(f.lhs), self._compile(f.rhs), f.bound)
        if isinstance(f, Eventually):
            return self._until(lambda k: True, self._compile(f.operand), f.bound)
        if isinstance(f, Globally):
            operand = self._compile(f.operand)
            witness = self._until(lambda k: True, lambda k: _not(operand(k)), f.bound)
            return lambda k: _not(witness(k))
        raise EvaluationError(f"unsupported formula node: {type(f).__name__}")

    def _atom(self, f: Atom) -> Callable[[int], Kleene]:
        fn = compile_expr(f.expr, self.trace.registry)
        rows = self.trace.rows
        if isinstance(f.expr, Compare):
            return lambda k: bool(fn(rows[k]))
        return lambda k: fn(rows[k]) != 0

    def _until(
        self,
        lhs: Callable[[int], Kleene],
        rhs: Callable[[int], Kleene],
        bound: Steps | object,
    ) -> Callable[[int], Kleene]:
        trace = self.trace
        times = trace.times
        by_steps = isinstance(bound, Steps)
        # timestamps are integral, so t_j - t_k <= d iff t_j - t_k <= floor(d)
        limit = bound.k if isinstance(bound, Steps) else math.floor(bound.d)  # type: ignore[attr-defined]
        memo: dict[int, bool] = {}
        # cursor[k]: every position in [k, cursor[k]) has rhs False and lhs True
        cursor: dict[int, int] = {}

        def value(k: int) -> Kleene:
            known = memo.get(k)
            if known is not None:
                return known
            n = len(times)
            j = cursor.get(k, k)
            result: Kleene = False
            pre: Kleene = True
            advancing = True
            closed = False
            t_k = times[k]
            while True:
                if by_steps:
                    if j - k > limit:
                        closed = True
                        break
                elif j < n and times[j] - t_k > limit:
                    closed = True
                    break
                if j >= n:
                    closed = self.complete
                    break
                r2 = rhs(j)
                term = _and(pre, r2)
                if term is True:
                    memo[k] = True
                    return True
                if term is None:
                    result = None
                r1 = lhs(j)
                pre = _and(pre, r1)
                if pre is False:
                    closed = True
                    break
                if advancing and r2 is False and r1 is True:
                    cursor[k] = j + 1
                else:
                    advancing = False
                j += 1
            if result is False and not closed:
                result = None
            if result is not None:
                memo[k] = result
                cursor.pop(k, None)
            return result

        return value


def evaluate(
    formula: Formula, trace: Trace, k: int = 0, complete: bool | None = None
) -> Verdict:
    """
    Evaluate a formula at position k of a trace.

    Args:
        formula: Formula AST
        trace: Trace (timestamps non-decreasing)
        k: Start index
        complete: Whether the trace is the whole behavior; defaults to ``trace.complete``

    Returns:
        TRUE or FALSE when forced by the trace, INCONCLUSIVE otherwise (incomplete traces only)

    Raises:
        EvaluationError: On unbound variables, division by zero, or k out of range
    """
    return TraceEvaluator(formula, trace, complete=complete).verdict(k)
