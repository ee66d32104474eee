"""
Tests for Laurent polynomials and rational functions over F_q.

These tests verify:
- Laurent arithmetic and Frobenius-based powering
- Lowest-terms normalization of rational functions
- Orders, poles and partial fractions
- Degree windows and the window cap of the coefficient ring
"""

import pytest
from pathlib import Path
import sys

from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from qfs_heights.divisors import INFINITY, PointP1
from qfs_heights.errors import DivisorError, WindowOverflowError
from qfs_heights.finite_field import get_field
from qfs_heights.rational_functions import LaurentPoly, RationalFunction, RationalFunctionRing


def lp(F, elems, offset=0):
    return LaurentPoly.from_elements(F, elems, offset)


class TestLaurentPoly:
    """Tests for LaurentPoly."""

    @pytest.mark.unit
    def test_trimming(self, F5):
        """Leading and trailing zeros are dropped into the offset."""
        f = lp(F5, [0, 0, 3, 0, 1, 0], offset=-2)

        assert f.low_degree == 0
        assert f.degree == 2
        assert list(f.terms()) == [(0, 3), (2, 1)]

    @pytest.mark.unit
    def test_zero_has_no_degree(self, F5):
        with pytest.raises(ValueError):
            LaurentPoly.zero(F5).degree

    @pytest.mark.unit
    def test_freshman_dream(self):
        """(t + 1)^3 = t^3 + 1 over F_3."""
        F3 = get_field(3)

        assert lp(F3, [1, 1]).pow(3) == lp(F3, [1, 0, 0, 1])

    @pytest.mark.unit
    @given(st.lists(st.integers(0, 4), min_size=1, max_size=4), st.integers(0, 12))
    @settings(max_examples=50, deadline=None)
    def test_pow_matches_repeated_multiplication(self, elems, k):
        F = get_field(5)
        f = lp(F, elems, offset=-1)
        expected = LaurentPoly.monomial(F, 1, 0)
        for _ in range(k):
            expected = expected * f

        assert f.pow(k) == expected

    @pytest.mark.unit
    def test_pow_over_extension(self, F9):
        """Frobenius on F_9 coefficients must match plain multiplication."""
        g = F9.parse('g')
        f = lp(F9, [1, g, 2])

        assert f.pow(3) == f * f * f
        assert f.pow(10) == f.pow(9) * f

    @pytest.mark.unit
    def test_window(self, F5):
        f = lp(F5, [1, 0, 0, 2], offset=-1)

        assert f.window(-1, 2).tolist() == [1, 0, 0, 2]
        assert f.window(3, 5).tolist() == [0, 0, 0]

    @pytest.mark.unit
    def test_restrict(self, F5):
        f = lp(F5, [1, 2, 3, 4], offset=-1)

        assert f.restrict(0, 1) == lp(F5, [2, 3])
        assert f.restrict(hi=-2).is_zero()

    @pytest.mark.unit
    def test_divide_linear(self, F5):
        """t^2 - 1 = (t - 1)(t + 1)."""
        quotient, remainder = lp(F5, [4, 0, 1]).divide_linear(1)

        assert quotient == lp(F5, [1, 1])
        assert remainder == 0

    @pytest.mark.unit
    def test_root_multiplicity(self, F5):
        f = LaurentPoly.linear_power(F5, 2, 3) * lp(F5, [1, 1])

        assert f.root_multiplicity(2) == 3
        assert f.root_multiplicity(4) == 1
        assert f.root_multiplicity(3) == 0

    @pytest.mark.unit
    def test_evaluate(self, F5):
        f = lp(F5, [1, 0, 2], offset=-1)   # t^-1 + 2t

        assert f.evaluate(2) == F5.add(F5.inv(2), 4)
        with pytest.raises(ZeroDivisionError):
            f.evaluate(0)


class TestRationalFunction:
    """Tests for RationalFunction."""

    @pytest.mark.unit
    def test_build_cancels_common_factors(self, F5):
        """(t - 2)^2 / (t - 2)^3 = 1 / (t - 2)."""
        f = RationalFunction.build(LaurentPoly.linear_power(F5, 2, 2), {2: 3})

        assert f.numerator == LaurentPoly.monomial(F5, 1, 0)
        assert f.denominator == ((2, 1),)

    @pytest.mark.unit
    def test_build_rejects_pole_at_zero(self, F5):
        with pytest.raises(DivisorError):
            RationalFunction.build(lp(F5, [1]), {0: 1})

    @pytest.mark.unit
    def test_orders(self, F5):
        """t^2 / (t - 1)^3 has orders 2 at 0, -3 at 1 and 1 at infinity."""
        f = RationalFunction.from_laurent(lp(F5, [1], offset=2)).divide_by_linear(1, 3)

        assert f.order_at(PointP1.rational(0)) == 2
        assert f.order_at(PointP1.rational(1)) == -3
        assert f.order_at(INFINITY) == 1
        assert f.pole_orders() == {PointP1.rational(1): 3}

    @pytest.mark.unit
    def test_order_at_labeled_point_raises(self, F5):
        f = RationalFunction.constant(F5, 1)

        with pytest.raises(DivisorError):
            f.order_at(PointP1.labeled('lam'))

    @pytest.mark.unit
    def test_partial_fractions(self, F5):
        """(2t - 1)/(t - 1)^2 = 2/(t - 1) + 1/(t - 1)^2."""
        one = RationalFunction.constant(F5, 1)
        two = RationalFunction.constant(F5, 2)
        f = one.divide_by_linear(1, 2) + two.divide_by_linear(1, 1)

        laurent, principal = f.partial_fractions()

        assert laurent.is_zero()
        assert principal == {1: [2, 1]}

    @pytest.mark.unit
    def test_partial_fractions_keep_laurent_part(self, F7):
        laurent_part = lp(F7, [3, 0, 1], offset=-1)     # 3t^-1 + t
        f = RationalFunction.from_laurent(laurent_part) + RationalFunction.constant(F7, 5).divide_by_linear(3)

        laurent, principal = f.partial_fractions()

        assert laurent == laurent_part
        assert principal == {3: [5]}

    @pytest.mark.unit
    def test_frobenius_is_pth_power(self, F5):
        f = RationalFunction.from_laurent(lp(F5, [1, 1], offset=-1)).divide_by_linear(2)

        assert f.frobenius() == f * f * f * f * f

    @pytest.mark.unit
    def test_evaluate(self, F5):
        """(t + 1)/(t - 2) at t = 3 is 4."""
        f = RationalFunction.from_laurent(lp(F5, [1, 1])).divide_by_linear(2)

        assert f.evaluate(3) == 4
        with pytest.raises(ZeroDivisionError):
            f.evaluate(2)

    @pytest.mark.unit
    def test_subtraction_to_zero(self, F7):
        f = RationalFunction.from_laurent(lp(F7, [2, 5])).divide_by_linear(4, 2)

        assert (f - f).is_zero()


class TestRationalFunctionRing:
    """Tests for the coefficient-ring adapter."""

    @pytest.mark.unit
    def test_from_int_reduces(self, F5):
        ring = RationalFunctionRing(F5)

        assert ring.from_int(7) == RationalFunction.constant(F5, 2)
        assert ring.is_zero(ring.from_int(5))

    @pytest.mark.unit
    def test_ring_operations(self, F5):
        ring = RationalFunctionRing(F5)
        t = RationalFunction.from_laurent(lp(F5, [1], offset=1))

        assert ring.mul(t, ring.one) == t
        assert ring.add(t, ring.neg(t)) == ring.zero
        assert ring.frobenius(t) == ring.pow(t, 5)

    @pytest.mark.unit
    def test_window_cap_from_config(self, F5):
        assert RationalFunctionRing(F5).window_cap == 4096

    @pytest.mark.unit
    def test_product_over_cap_raises(self, F5):
        """(t + 1)^2 (t + 1)^2 needs five monomials."""
        ring = RationalFunctionRing(F5, window_cap=4)
        square = RationalFunction.from_laurent(lp(F5, [1, 2, 1]))

        with pytest.raises(WindowOverflowError) as excinfo:
            ring.mul(square, square)

        assert excinfo.value.required == 5

    @pytest.mark.unit
    def test_frobenius_over_cap_raises(self, F5):
        ring = RationalFunctionRing(F5, window_cap=4)
        f = RationalFunction.from_laurent(lp(F5, [1, 1]))

        with pytest.raises(WindowOverflowError):
            ring.frobenius(f)


class TestDegreeWindow:
    """Tests for the degree window carried by rational functions."""

    @pytest.mark.unit
    def test_zero_has_no_window(self, F5):
        f = RationalFunction.zero(F5)

        assert f.degree_window is None
        assert f.window_width == 0

    @pytest.mark.unit
    def test_window_of_numerator(self, F5):
        f = RationalFunction.from_laurent(lp(F5, [3, 0, 1], offset=-1)).divide_by_linear(2)

        assert f.degree_window == (-1, 1)
        assert f.window_width == 3

    @pytest.mark.unit
    def test_product_enlarges_window(self, F5):
        f = RationalFunction.from_laurent(lp(F5, [1, 1], offset=-1))
        g = RationalFunction.from_laurent(lp(F5, [1, 0, 2], offset=2))

        assert (f * g).degree_window == (1, 4)

    @pytest.mark.unit
    def test_cancellation_shrinks_window(self, F5):
        f = RationalFunction.from_laurent(lp(F5, [1, 1]))
        g = RationalFunction.from_laurent(lp(F5, [0, 1]))

        assert (f - g).degree_window == (0, 0)

    @pytest.mark.unit
    def test_window_ignored_by_equality(self, F5):
        f = RationalFunction.from_laurent(lp(F5, [1, 4]))

        assert f == RationalFunction(f.numerator, f.denominator)
