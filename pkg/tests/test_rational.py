"""Exact Gaussian rationals and rational turns"""

from fractions import Fraction

import pytest

from core.rational import (
    I, ONE, ZERO, AlgebraError, ComplexRational, RationalTurn, character, turns_up_to_order,
)


class TestComplexRational:
    def test_parse_forms(self):
        assert ComplexRational.parse("3") == ComplexRational(3, 0)
        assert ComplexRational.parse("1/2") == ComplexRational(Fraction(1, 2), 0)
        assert ComplexRational.parse("i") == I
        assert ComplexRational.parse("-2 + 1/3 i") == ComplexRational(-2, Fraction(1, 3))

    def test_parse_rejects_decimals(self):
        with pytest.raises(AlgebraError):
            ComplexRational.parse("0.5")

    def test_field_arithmetic(self):
        a = ComplexRational(1, 2)
        b = ComplexRational(Fraction(1, 2), -1)
        assert a * a.inverse() == ONE
        assert (a + b) - b == a
        assert I * I == -ONE
        assert a.conjugate() == ComplexRational(1, -2)
        assert a.norm() == 5

    def test_negative_powers(self):
        two = ComplexRational(2, 0)
        assert two ** -2 == ComplexRational(Fraction(1, 4), 0)
        assert I ** -1 == -I

    def test_inverse_of_zero(self):
        with pytest.raises((AlgebraError, ZeroDivisionError)):
            ZERO.inverse()


class TestRationalTurn:
    def test_reduction(self):
        assert RationalTurn(2, 4) == RationalTurn(1, 2)
        assert RationalTurn(-1, 3) == RationalTurn(2, 3)
        assert RationalTurn(5, 5) == RationalTurn(0, 1)

    def test_group_law(self):
        quarter = RationalTurn(1, 4)
        assert quarter * quarter == RationalTurn(1, 2)
        assert quarter ** 4 == RationalTurn(0, 1)
        assert quarter * quarter.inverse() == RationalTurn(0, 1)
        assert quarter.order == 4

    def test_exact_values(self):
        assert RationalTurn(1, 2).to_complex_rational() == -ONE
        assert RationalTurn(3, 4).to_complex_rational() == -I
        assert RationalTurn(1, 3).to_complex_rational() is None

    def test_bad_denominator(self):
        with pytest.raises(AlgebraError):
            RationalTurn(1, 0)

    def test_character(self):
        mu, nu = RationalTurn(1, 2), RationalTurn(1, 2)
        assert character((1, -1), mu, nu).is_identity()
        assert not character((1, 0), mu, nu).is_identity()

    def test_turns_up_to_order(self):
        turns = list(turns_up_to_order(6))
        # phi(1) + ... + phi(6)
        assert len(turns) == 12
        assert len(set(turns)) == 12
        assert all(t.order <= 6 for t in turns)
