"""
Tests for log Calabi-Yau pairs on P^1.

These tests verify:
- Classification into cases i-vi
- The congruence table
- The cover route and its agreement with the table
- The quasi-F-split dichotomy
"""

import pytest
from fractions import Fraction
from pathlib import Path
import sys
from unittest.mock import patch

import sympy

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from qfs_heights.dieudonne import Finite, Infinite
from qfs_heights.divisors import parse_divisor
from qfs_heights.elliptic import supersingular_parameters
from qfs_heights.errors import MissingSupportError, UnresolvedHeightError, UnsupportedParametersError
from qfs_heights.finite_field import get_field
from qfs_heights.logcy import (
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
    CaseV,
    CaseVI,
    NotLogCY,
    case_divisor,
    classify,
    height_from_table,
    height_via_cover,
    is_standard,
    quasi_f_split_dichotomy,
)

PRIMES_100 = list(sympy.primerange(2, 101))
ODD_PRIMES_100 = PRIMES_100[1:]


def case_class(case, p=None):
    """Classified standard model; case iv puts its fourth point at -1."""
    lam = None
    if case == 'iv':
        lam = get_field(2, 2).parse('g') if p == 2 else p - 1
    return classify(case_divisor(case, lam))


class TestClassify:
    """Tests for classify."""

    @pytest.mark.unit
    @pytest.mark.parametrize("literal,expected", [
        ('2/3:0,2/3:1,2/3:inf', CaseI),
        ('1/2:0,3/4:1,3/4:inf', CaseII),
        ('5/6:0,1/2:1,2/3:inf', CaseIII),
        ('1/2:0,1/2:1,1/2:2,1/2:inf', CaseIV),
        ('1:0,1/2:1,1/2:inf', CaseV),
        ('1:0,1:inf', CaseVI),
    ])
    def test_cases(self, literal, expected):
        assert type(classify(parse_divisor(literal))) is expected

    @pytest.mark.unit
    def test_non_standard_coefficient(self):
        cls = classify(parse_divisor('1/3:0,2/3:1,1:inf'))

        assert isinstance(cls, NotLogCY)
        assert 'non-standard' in cls.reason

    @pytest.mark.unit
    def test_wrong_degree(self):
        cls = classify(parse_divisor('1/2:0,1/2:1'))

        assert isinstance(cls, NotLogCY)
        assert 'degree' in cls.reason

    @pytest.mark.unit
    @pytest.mark.parametrize("c,expected", [
        ('1', True), ('1/2', True), ('5/6', True), ('1/3', False), ('3/2', False), ('0', False),
    ])
    def test_is_standard(self, c, expected):
        assert is_standard(Fraction(c)) is expected

    @pytest.mark.unit
    def test_treated_cases(self):
        assert case_class('iii').treated
        assert not classify(case_divisor('v')).treated

    @pytest.mark.unit
    def test_case_iv_needs_point(self):
        with pytest.raises(MissingSupportError):
            case_divisor('iv')


class TestTable:
    """Tests for height_from_table."""

    @pytest.mark.unit
    @pytest.mark.parametrize("case,p,e,expected", [
        ('i', 7, 4, Finite(1)),
        ('i', 5, 2, Finite(3)),
        ('i', 3, 1, Infinite()),
        ('ii', 3, 2, Finite(3)),
        ('ii', 13, 5, Finite(1)),
        ('iii', 2, 1, Infinite()),
        ('iii', 3, 1, Infinite()),
        ('iii', 7, 3, Finite(1)),
        ('iii', 5, 3, Finite(4)),
        ('iv', 2, 1, Infinite()),
    ])
    def test_values(self, case, p, e, expected):
        assert height_from_table(case_class(case, p), p, e) == expected

    @pytest.mark.unit
    def test_case_ii_column(self):
        """Case ii at e = 2 for p <= 20."""
        cls = case_class('ii')
        got = {p: str(height_from_table(cls, p, 2)) for p in sympy.primerange(2, 21)}

        assert got == {2: 'inf', 3: '3', 5: '1', 7: '3', 11: '3', 13: '1', 17: '1', 19: '3'}

    @pytest.mark.unit
    def test_case_iv_follows_cross_ratio(self):
        """-1 is supersingular for p = 3 mod 4, where 1 - (-1) = 2 is too."""
        for p in (3, 7, 11):
            assert height_from_table(case_class('iv', p), p, 2) == Finite(3)
        for p in (5, 13):
            assert height_from_table(case_class('iv', p), p, 2) == Finite(1)

    @pytest.mark.unit
    def test_case_iv_over_f25(self):
        """A root of 1 + 4x + x^2 in F_25 gives height e + 1."""
        F25 = get_field(5, 2)
        lam = supersingular_parameters(F25)[0]
        cls = classify(case_divisor('iv', lam))

        assert height_from_table(cls, 5, 3, F25) == Finite(4)
        assert height_via_cover(cls, 5, 3, F25) == Finite(4)

    @pytest.mark.unit
    def test_case_iv_labeled_support(self):
        cls = classify(parse_divisor('1/2:@A,1/2:@B,1/2:@C,1/2:@D'))

        with pytest.raises(MissingSupportError):
            height_from_table(cls, 5, 1)
        assert height_from_table(cls, 2, 1) == Infinite()

    @pytest.mark.unit
    @pytest.mark.parametrize("literal", ['1:0,1/2:1,1/2:inf', '1:0,1:inf', '1/2:0'])
    def test_untreated_rejected(self, literal):
        with pytest.raises(UnsupportedParametersError):
            height_from_table(classify(parse_divisor(literal)), 5, 1)

    @pytest.mark.unit
    @pytest.mark.parametrize("case", ['i', 'ii', 'iii', 'iv'])
    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_shape_in_e(self, case, p):
        """The column is 1 for all e, e + 1 for all e, or infinite for all e."""
        cls = case_class(case, p)
        column = [height_from_table(cls, p, e) for e in range(1, 6)]

        assert (column == [Finite(1)] * 5
                or column == [Finite(e + 1) for e in range(1, 6)]
                or all(isinstance(h, Infinite) for h in column))


class TestCover:
    """Tests for height_via_cover."""

    @pytest.mark.unit
    def test_case_i_p5(self):
        """Supersingular y^2 = x^3 + 1 over F_5."""
        assert height_via_cover(case_class('i'), 5, 1) == Finite(2)

    @pytest.mark.unit
    def test_case_ii_p2_by_vanishing(self):
        result = height_via_cover(case_class('ii'), 2, 1)

        assert isinstance(result, Infinite)
        assert 'H^1' in result.reason

    @pytest.mark.unit
    def test_unresolved(self):
        """No Cartier power and a non-vanishing H^1 is reported, not guessed."""
        cls = CaseII(parse_divisor('1/2:0'))

        with pytest.raises(UnresolvedHeightError):
            height_via_cover(cls, 2, 1)

    @pytest.mark.unit
    @pytest.mark.parametrize("case", ['i', 'ii', 'iii'])
    @pytest.mark.parametrize("p", ODD_PRIMES_100)
    def test_agrees_with_table(self, case, p):
        cls = case_class(case)
        for e in (1, 2, 3):
            assert height_via_cover(cls, p, e) == height_from_table(cls, p, e)

    @pytest.mark.unit
    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29])
    def test_case_iv_agrees_with_table(self, p):
        F = get_field(p)
        for lam in range(2, p):
            cls = classify(case_divisor('iv', lam))
            assert height_via_cover(cls, p, 2, F) == height_from_table(cls, p, 2, F)

    @pytest.mark.slow
    def test_case_i_p2_direct(self):
        """No elliptic cover in characteristic 2; the direct verifier finds e + 1."""
        assert height_via_cover(case_class('i'), 2, 1) == Finite(2)

    @pytest.mark.unit
    def test_case_i_p2_beyond_direct_range(self):
        """e = 4 needs n = 5 > direct_max_n; the table answers with a warning."""
        with patch('qfs_heights.logcy.height_search') as search, \
                patch('qfs_heights.logcy.logger') as logger:
            result = height_via_cover(case_class('i'), 2, 4)

        assert result == Finite(5)
        search.assert_not_called()
        logger.warning.assert_called_once()


class TestDichotomy:
    """Tests for quasi_f_split_dichotomy."""

    @pytest.mark.unit
    @pytest.mark.parametrize("case,p,expected", [
        ('i', 3, False),
        ('iv', 5, True),
        ('iii', 2, False),
        ('i', 2, True),
    ])
    def test_examples(self, case, p, expected):
        assert quasi_f_split_dichotomy(case_class(case, p).delta, p) is expected

    @pytest.mark.unit
    @pytest.mark.parametrize("case", ['i', 'ii', 'iii', 'iv'])
    @pytest.mark.parametrize("p", PRIMES_100)
    def test_matches_table(self, case, p):
        cls = case_class(case, p)
        finite = isinstance(height_from_table(cls, p, 1), Finite)

        assert quasi_f_split_dichotomy(cls.delta, p) is finite
