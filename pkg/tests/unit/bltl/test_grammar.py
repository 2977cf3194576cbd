"""Tests for formula and query parsing."""

from fractions import Fraction

import pytest

from smcheck.bltl.grammar import BltlError, FormulaSyntaxError, parse_formula, parse_query
from smcheck.models.formula import (
    And,
    Atom,
    BinOp,
    Compare,
    Const,
    Estimate,
    Eventually,
    FalseF,
    Globally,
    Implies,
    Mean,
    Not,
    Or,
    Steps,
    Test,
    Time,
    TrueF,
    Until,
    Var,
    format_formula,
    format_query,
    formula_variables,
)


def _eq(name: str, value: int) -> Atom:
    return Atom(Compare("=", Var(name), Const(value)))


class TestParseFormula:
    """Tests for parse_formula."""

    def test_constants(self) -> None:
        assert parse_formula("true") == TrueF()
        assert parse_formula("false") == FalseF()

    def test_fifo_step_bounded_formula(self) -> None:
        """Test the FIFO latency formula with step bounds."""
        formula = parse_formula("G<=#10000((c_read = 38) => (F<=#15(c_read = 64)))")

        assert formula == Globally(
            Implies(_eq("c_read", 38), Eventually(_eq("c_read", 64), Steps(15))),
            Steps(10000),
        )

    def test_character_literals_are_code_points(self) -> None:
        """Test that '&' and '@' resolve to 38 and 64."""
        formula = parse_formula("(c_read = '&') => F<=25 (c_read = '@')")

        assert formula == Implies(
            _eq("c_read", 38),
            Eventually(_eq("c_read", 64), Time(Fraction(25))),
        )

    def test_whitespace_insensitive(self) -> None:
        assert parse_formula("F<=5(x=1)") == parse_formula("  F <= 5 ( x = 1 )  ")

    def test_bare_identifier_is_atom(self) -> None:
        """Test that boolean probe names may be used directly."""
        assert parse_formula("div:entry") == Atom(Var("div:entry"))

    def test_arithmetic_precedence(self) -> None:
        """Test that * binds tighter than +."""
        formula = parse_formula("a + b * 2 > 3")

        assert formula == Atom(
            Compare(">", BinOp("+", Var("a"), BinOp("*", Var("b"), Const(2))), Const(3))
        )

    def test_and_binds_tighter_than_or(self) -> None:
        assert parse_formula("a | b & c") == Or(Atom(Var("a")), And(Atom(Var("b")), Atom(Var("c"))))

    def test_implies_is_right_associative(self) -> None:
        assert parse_formula("a => b => c") == Implies(
            Atom(Var("a")), Implies(Atom(Var("b")), Atom(Var("c")))
        )

    def test_not_binds_tightest(self) -> None:
        assert parse_formula("!a & b") == And(Not(Atom(Var("a"))), Atom(Var("b")))

    def test_until(self) -> None:
        formula = parse_formula("(x = 0) U<=5 (x = 2)")
        assert formula == Until(_eq("x", 0), _eq("x", 2), Time(Fraction(5)))

    def test_until_nests_to_the_right(self) -> None:
        formula = parse_formula("a U<=1 b U<=2 c")
        assert formula == Until(
            Atom(Var("a")),
            Until(Atom(Var("b")), Atom(Var("c")), Time(Fraction(2))),
            Time(Fraction(1)),
        )

    def test_until_left_operand_is_a_primary(self) -> None:
        formula = parse_formula("!a U<=1 b")
        assert formula == Not(Until(Atom(Var("a")), Atom(Var("b")), Time(Fraction(1))))
        assert parse_formula("(!a) U<=1 b") == Until(Not(Atom(Var("a"))), Atom(Var("b")), Time(Fraction(1)))

    def test_fractional_time_bound_is_exact(self) -> None:
        formula = parse_formula("F<=2.5 x")
        assert isinstance(formula, Eventually)
        assert formula.bound == Time(Fraction(5, 2))

    def test_range_formula(self) -> None:
        formula = parse_formula("G<=100 (3 <= n_elements & n_elements <= 7)")
        assert formula_variables(formula) == {"n_elements"}

    @pytest.mark.parametrize(
        "text",
        ["", "F<= x", "x = ", "(x = 1", "G<=#5", "x == 1", "x ? y"],
    )
    def test_syntax_errors(self, text: str) -> None:
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text)

    def test_syntax_error_has_position(self) -> None:
        with pytest.raises(FormulaSyntaxError) as exc_info:
            parse_formula("x = 1 & ? y")
        assert exc_info.value.line == 1
        assert exc_info.value.column > 0

    def test_fractional_step_bound_rejected(self) -> None:
        with pytest.raises(FormulaSyntaxError):
            parse_formula("F<=#2.5 x")

    @pytest.mark.parametrize(
        "text",
        [
            "G<=#10000((c_read = 38) => (F<=#15(c_read = 64)))",
            "(x = 0) U<=5 (x = 2)",
            "!(a | b) & F<=3 (x / 2 >= 1.5)",
            "G<=100 (3 <= n_elements & n_elements <= 7)",
        ],
    )
    def test_format_reparses_to_same_ast(self, text: str) -> None:
        formula = parse_formula(text)
        assert parse_formula(format_formula(formula)) == formula


class TestParseQuery:
    """Tests for parse_query."""

    def test_estimate(self) -> None:
        assert parse_query("Pr(F<=10 x)") == Estimate(Eventually(Atom(Var("x")), Time(Fraction(10))))

    def test_test(self) -> None:
        query = parse_query("Pr>=0.9(F<=10 x)")
        assert isinstance(query, Test)
        assert query.theta == 0.9

    def test_mean(self) -> None:
        assert parse_query("X<=1036800(reboot_count)") == Mean("reboot_count", Fraction(1036800))

    def test_mean_rejects_step_bound(self) -> None:
        with pytest.raises(FormulaSyntaxError):
            parse_query("X<=#10(x)")

    @pytest.mark.parametrize("text", ["Pr>=1.5(x)", "Pr>=1(x)", "Pr>=0(x)"])
    def test_threshold_out_of_range(self, text: str) -> None:
        with pytest.raises(FormulaSyntaxError, match="threshold"):
            parse_query(text)

    def test_bare_formula_is_an_estimate(self) -> None:
        assert parse_query("F<=10 x") == Estimate(Eventually(Atom(Var("x")), Time(Fraction(10))))

    def test_bare_step_bounded_formula(self) -> None:
        query = parse_query("G<=#10000((c_read = 38) => (F<=#15(c_read = 64)))")
        assert query == Estimate(parse_formula("G<=#10000((c_read = 38) => (F<=#15(c_read = 64)))"))

    def test_semantic_errors_are_syntax_errors(self) -> None:
        assert issubclass(FormulaSyntaxError, BltlError)
        with pytest.raises(FormulaSyntaxError):
            parse_query("Pr(F<=#1.5 x)")

    @pytest.mark.parametrize("text", ["Pr(F<=10 x)", "Pr>=0.5(G<=#3 (y < 2))", "X<=250(n)"])
    def test_format_query_reparses(self, text: str) -> None:
        query = parse_query(text)
        assert parse_query(format_query(query)) == query
