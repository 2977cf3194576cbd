"""Tests for formula horizons."""

from fractions import Fraction

from smcheck.bltl.grammar import parse_formula
from smcheck.bltl.horizon import ZERO, Horizon, horizon


class TestHorizon:
    """Tests for horizon."""

    def test_atom(self) -> None:
        assert horizon(parse_formula("x = 1")) == ZERO

    def test_nested_steps(self) -> None:
        formula = parse_formula("G<=#10000((c_read = 38) => (F<=#15(c_read = 64)))")
        assert horizon(formula) == Horizon(10015, Fraction(0))

    def test_nested_time(self) -> None:
        formula = parse_formula("G<=5000((c_read = 38) => F<=25 (c_read = 64))")
        assert horizon(formula) == Horizon(0, Fraction(5025))

    def test_until_takes_max_of_operands(self) -> None:
        formula = parse_formula("(F<=3 a) U<=10 (F<=#4 b)")
        assert horizon(formula) == Horizon(4, Fraction(13))

    def test_boolean_connectives_join(self) -> None:
        formula = parse_formula("F<=7 a & !G<=#2 b")
        assert horizon(formula) == Horizon(2, Fraction(7))

    def test_fractional_bound(self) -> None:
        assert horizon(parse_formula("F<=0.5 F<=0.25 a")).time == Fraction(3, 4)
