"""
Laurent polynomials and rational functions over F_q in one variable t.

LaurentPoly stores a numpy digit array of shape (length, m) plus the
exponent of its first row; multiplication convolves digit columns and folds
the result back through the field's reduction matrix. RationalFunction is a
Laurent numerator over prod (t - lam)^b_lam for finite lam != 0, kept in
lowest terms so that equality is structural.

Usage:
    from qfs_heights.finite_field import get_field
    from qfs_heights.rational_functions import LaurentPoly, RationalFunction

    F = get_field(3)
    t = LaurentPoly.monomial(F, 1, 1)
    f = RationalFunction.from_laurent(t * t + t).divide_by_linear(1, 2)
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from qfs_heights.config import config
from qfs_heights.divisors import PointP1
from qfs_heights.errors import DivisorError, WindowOverflowError
from qfs_heights.finite_field import FqContext

logger = logging.getLogger(__name__)


class LaurentPoly:
    """
    A Laurent polynomial sum_k a_k t^k over F_q.

    Instances are treated as immutable; the coefficient array is trimmed so
    that the first and last rows are nonzero (or the array is empty).
    """

    __slots__ = ('field', 'offset', 'coeffs')

    def __init__(self, field: FqContext, coeffs: np.ndarray, offset: int = 0):
        self.field = field
        arr = np.asarray(coeffs, dtype=np.int64).reshape(-1, field.m) % field.p
        nonzero = np.flatnonzero(arr.any(axis=1))
        if nonzero.size == 0:
            self.coeffs = arr[:0]
            self.offset = 0
        else:
            lo, hi = int(nonzero[0]), int(nonzero[-1])
            self.coeffs = arr[lo:hi + 1]
            self.offset = offset + lo

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def zero(cls, field: FqContext) -> 'LaurentPoly':
        return cls(field, np.zeros((0, field.m), dtype=np.int64))

    @classmethod
    def monomial(cls, field: FqContext, coeff: int, exponent: int) -> 'LaurentPoly':
        return cls(field, field.to_array([coeff]), exponent)

    @classmethod
    def from_elements(cls, field: FqContext, elems: Sequence[int], offset: int = 0) -> 'LaurentPoly':
        """Coefficients a_offset, a_offset+1, ... given as field elements."""
        if not elems:
            return cls.zero(field)
        return cls(field, field.to_array(elems), offset)

    @classmethod
    def linear_power(cls, field: FqContext, lam: int, k: int) -> 'LaurentPoly':
        """(t - lam)^k for k >= 0."""
        base = cls.from_elements(field, [field.neg(lam), 1])
        return base.pow(k)

    # ------------------------------------------------------------------
    # inspection

    def is_zero(self) -> bool:
        return self.coeffs.shape[0] == 0

    @property
    def low_degree(self) -> int:
        if self.is_zero():
            raise ValueError("zero Laurent polynomial has no low degree")
        return self.offset

    @property
    def degree(self) -> int:
        if self.is_zero():
            raise ValueError("zero Laurent polynomial has no degree")
        return self.offset + self.coeffs.shape[0] - 1

    @property
    def span(self) -> int:
        """Number of monomial slots between the lowest and highest term."""
        return self.coeffs.shape[0]

    def coefficient(self, k: int) -> int:
        idx = k - self.offset
        if 0 <= idx < self.coeffs.shape[0]:
            return self.field.from_array(self.coeffs[idx:idx + 1])[0]
        return 0

    def terms(self) -> Iterator[Tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order."""
        elems = self.field.from_array(self.coeffs)
        for i, c in enumerate(elems):
            if c:
                yield self.offset + i, c

    def window(self, lo: int, hi: int) -> np.ndarray:
        """F_p digit vector of the coefficients of t^lo..t^hi (inclusive)."""
        m = self.field.m
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros((hi - lo + 1, m), dtype=np.int64)
        if not self.is_zero():
            a, b = max(lo, self.offset), min(hi, self.degree)
            if a <= b:
                out[a - lo:b - lo + 1] = self.coeffs[a - self.offset:b - self.offset + 1]
        return out.reshape(-1)

    def restrict(self, lo: Optional[int] = None, hi: Optional[int] = None) -> 'LaurentPoly':
        """Terms with lo <= exponent <= hi (either bound may be open)."""
        if self.is_zero():
            return self
        a = self.offset if lo is None else max(lo, self.offset)
        b = self.degree if hi is None else min(hi, self.degree)
        if a > b:
            return LaurentPoly.zero(self.field)
        return LaurentPoly(self.field, self.coeffs[a - self.offset:b - self.offset + 1], a)

    # ------------------------------------------------------------------
    # arithmetic

    def _aligned(self, other: 'LaurentPoly') -> Tuple[np.ndarray, np.ndarray, int]:
        lo = min(self.offset, other.offset)
        hi = max(self.offset + self.span, other.offset + other.span)
        a = np.zeros((hi - lo, self.field.m), dtype=np.int64)
        b = np.zeros_like(a)
        a[self.offset - lo:self.offset - lo + self.span] = self.coeffs
        b[other.offset - lo:other.offset - lo + other.span] = other.coeffs
        return a, b, lo

    def __add__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b, lo = self._aligned(other)
        return LaurentPoly(self.field, a + b, lo)

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly(self.field, -self.coeffs, self.offset)

    def __sub__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        return self + (-other)

    def __mul__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero(self.field)
        F = self.field
        m = F.m
        length = self.span + other.span - 1
        if m == 1:
            prod = np.convolve(self.coeffs[:, 0], other.coeffs[:, 0]).reshape(-1, 1)
        else:
            wide = np.zeros((length, 2 * m - 1), dtype=np.int64)
            for i in range(m):
                ai = self.coeffs[:, i]
                if not ai.any():
                    continue
                for j in range(m):
                    bj = other.coeffs[:, j]
                    if bj.any():
                        wide[:, i + j] += np.convolve(ai, bj) % F.p
            prod = (wide % F.p) @ F.reduction
        return LaurentPoly(F, prod, self.offset + other.offset)

    def scale(self, c: int) -> 'LaurentPoly':
        """Multiply by a field element."""
        if c == 0:
            return LaurentPoly.zero(self.field)
        if c == 1:
            return self
        return self * LaurentPoly.monomial(self.field, c, 0)

    def shift(self, k: int) -> 'LaurentPoly':
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return LaurentPoly(self.field, self.coeffs, self.offset + k)

    def frobenius(self, k: int = 1) -> 'LaurentPoly':
        """Raise to the p^k-th power: coefficients to c^(p^k), t to t^(p^k)."""
        if self.is_zero() or k == 0:
            return self
        F = self.field
        q_k = F.p ** k
        digits = self.coeffs
        if F.m > 1:
            for _ in range(k % F.m):
                digits = (digits @ F.frobenius_matrix) % F.p
        out = np.zeros(((self.span - 1) * q_k + 1, F.m), dtype=np.int64)
        out[::q_k] = digits
        return LaurentPoly(F, out, self.offset * q_k)

    def pow(self, k: int) -> 'LaurentPoly':
        """k-th power for k >= 0, using Frobenius on the base-p digits of k."""
        if k < 0:
            raise ValueError("negative powers of Laurent polynomials need a RationalFunction")
        if k == 0:
            return LaurentPoly.monomial(self.field, 1, 0)
        if self.is_zero():
            return self
        if self.span == 1:
            c = self.field.pow(self.coefficient(self.offset), k)
            return LaurentPoly.monomial(self.field, c, self.offset * k)
        p = self.field.p
        result = LaurentPoly.monomial(self.field, 1, 0)
        level, base = 0, self
        while k:
            digit = k % p
            if digit:
                power = base
                for _ in range(digit - 1):
                    power = power * base
                result = result * power
            k //= p
            level += 1
            base = self.frobenius(level)
        return result

    def __pow__(self, k: int) -> 'LaurentPoly':
        return self.pow(k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (self.field == other.field and self.offset == other.offset
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.m, self.offset, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return 'LaurentPoly(0)'
        body = ' + '.join(f'{self.field.format(c)}*t^{k}' for k, c in self.terms())
        return f'LaurentPoly({body})'

    # ------------------------------------------------------------------
    # evaluation and division

    def evaluate(self, point: int) -> int:
        """Value at a nonzero field element (or at 0 for polynomials)."""
        F = self.field
        if self.is_zero():
            return 0
        if point == 0:
            if self.offset < 0:
                raise ZeroDivisionError("Laurent polynomial has a pole at 0")
            return self.coefficient(0)
        acc = 0
        for c in reversed(F.from_array(self.coeffs)):
            acc = F.add(F.mul(acc, point), c)
        return F.mul(acc, F.pow(point, self.offset))

    def divide_linear(self, lam: int) -> Tuple['LaurentPoly', int]:
        """
        Synthetic division of the polynomial part by (t - lam), lam != 0.

        Returns (quotient, remainder) with self = (t - lam) quotient + remainder t^offset.
        """
        F = self.field
        if self.is_zero():
            return self, 0
        elems = F.from_array(self.coeffs)
        # divide t^-offset * self, a polynomial with nonzero constant term
        out = [0] * (len(elems) - 1)
        acc = 0
        for i in range(len(elems) - 1, 0, -1):
            acc = F.add(elems[i], F.mul(acc, lam))
            out[i - 1] = acc
        remainder = F.add(elems[0], F.mul(acc, lam))
        return LaurentPoly.from_elements(F, out, self.offset), remainder

    def root_multiplicity(self, lam: int) -> int:
        """Multiplicity of lam != 0 as a root."""
        count, cur = 0, self
        while not cur.is_zero():
            quotient, remainder = cur.divide_linear(lam)
            if remainder != 0:
                break
            count += 1
            cur = quotient
        return count


# ----------------------------------------------------------------------
# rational functions

Denominator = Tuple[Tuple[int, int], ...]


def _merge(a: Denominator, b: Denominator, sign: int = 1) -> Dict[int, int]:
    out = dict(a)
    for lam, k in b:
        out[lam] = out.get(lam, 0) + sign * k
    return out


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """
    numerator / prod_{lam != 0} (t - lam)^b_lam with the numerator a Laurent
    polynomial coprime to every listed factor.

    degree_window holds the lowest and highest t-exponent of the numerator
    (None for zero); sums and products carry their enlarged window in it.
    """
    numerator: LaurentPoly
    denominator: Denominator = ()
    degree_window: Optional[Tuple[int, int]] = dataclasses.field(init=False, default=None)

    def __post_init__(self):
        if not self.numerator.is_zero():
            object.__setattr__(self, 'degree_window', (self.numerator.low_degree, self.numerator.degree))

    @property
    def window_width(self) -> int:
        """Monomial slots spanned by the degree window."""
        if self.degree_window is None:
            return 0
        lo, hi = self.degree_window
        return hi - lo + 1

    @classmethod
    def from_laurent(cls, numerator: LaurentPoly) -> 'RationalFunction':
        return cls(numerator, ())

    @classmethod
    def constant(cls, field: FqContext, c: int) -> 'RationalFunction':
        return cls(LaurentPoly.monomial(field, c, 0))

    @classmethod
    def zero(cls, field: FqContext) -> 'RationalFunction':
        return cls(LaurentPoly.zero(field))

    @classmethod
    def build(cls, numerator: LaurentPoly, denominator: Dict[int, int]) -> 'RationalFunction':
        """Reduce numerator / prod (t - lam)^k to lowest terms (k may be negative)."""
        F = numerator.field
        if numerator.is_zero():
            return cls(numerator, ())
        num = numerator
        kept = {}
        for lam, k in denominator.items():
            if lam == 0:
                raise DivisorError("poles at 0 are carried by the Laurent numerator")
            if k < 0:
                num = num * LaurentPoly.linear_power(F, lam, -k)
                continue
            while k > 0:
                quotient, remainder = num.divide_linear(lam)
                if remainder != 0:
                    break
                num, k = quotient, k - 1
            if k > 0:
                kept[lam] = k
        return cls(num, tuple(sorted(kept.items())))

    @property
    def field(self) -> FqContext:
        return self.numerator.field

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _denominator_poly(self, exponents: Dict[int, int]) -> LaurentPoly:
        out = LaurentPoly.monomial(self.field, 1, 0)
        for lam, k in exponents.items():
            if k > 0:
                out = out * LaurentPoly.linear_power(self.field, lam, k)
        return out

    def __add__(self, other: 'RationalFunction') -> 'RationalFunction':
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        common = {lam: max(dict(self.denominator).get(lam, 0), dict(other.denominator).get(lam, 0))
                  for lam in set(dict(self.denominator)) | set(dict(other.denominator))}
        left = self.numerator * self._denominator_poly(_merge(tuple(common.items()), self.denominator, -1))
        right = other.numerator * other._denominator_poly(_merge(tuple(common.items()), other.denominator, -1))
        return RationalFunction.build(left + right, common)

    def __neg__(self) -> 'RationalFunction':
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: 'RationalFunction') -> 'RationalFunction':
        return self + (-other)

    def __mul__(self, other: 'RationalFunction') -> 'RationalFunction':
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.field)
        out = RationalFunction.build(self.numerator * other.numerator,
                                     _merge(self.denominator, other.denominator))
        if out.window_width > max(self.window_width, other.window_width):
            logger.debug("product window %s from %s and %s",
                         out.degree_window, self.degree_window, other.degree_window)
        return out

    def scale(self, c: int) -> 'RationalFunction':
        return RationalFunction(self.numerator.scale(c), self.denominator if c else ())

    def divide_by_linear(self, lam: int, k: int = 1) -> 'RationalFunction':
        """Divide by (t - lam)^k (lam != 0) or by t^k (lam == 0)."""
        if lam == 0:
            return RationalFunction(self.numerator.shift(-k), self.denominator)
        return RationalFunction.build(self.numerator, _merge(self.denominator, ((lam, k),)))

    def pow(self, k: int) -> 'RationalFunction':
        if k < 0:
            raise ValueError("use inverse() for negative powers")
        if k == 0:
            return RationalFunction.constant(self.field, 1)
        return RationalFunction(self.numerator.pow(k),
                                tuple((lam, b * k) for lam, b in self.denominator))

    def frobenius(self, k: int = 1) -> 'RationalFunction':
        """p^k-th power, computed on the numerator by LaurentPoly.frobenius."""
        q_k = self.field.p ** k
        return RationalFunction(self.numerator.frobenius(k),
                                tuple((lam, b * q_k) for lam, b in self.denominator))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        den = ''.join(f'(t-{self.field.format(lam)})^{k}' for lam, k in self.denominator)
        return f'RationalFunction({self.numerator!r} / {den or "1"})'

    # ------------------------------------------------------------------
    # orders and partial fractions

    def order_at(self, point: PointP1) -> Optional[int]:
        """Valuation at a rational point or infinity; None for the zero function."""
        if self.is_zero():
            return None
        if point.is_labeled:
            raise DivisorError(f"cannot evaluate order at symbolic point {point}")
        if point.is_infinity:
            return -self.numerator.degree + sum(b for _, b in self.denominator)
        lam = point.value
        if lam == 0:
            return self.numerator.low_degree
        return self.numerator.root_multiplicity(lam) - dict(self.denominator).get(lam, 0)

    def pole_orders(self) -> Dict[PointP1, int]:
        """Pole orders at every point where the function has a pole."""
        out: Dict[PointP1, int] = {}
        if self.is_zero():
            return out
        points = [PointP1.rational(0), PointP1('infinity')]
        points += [PointP1.rational(lam) for lam, _ in self.denominator]
        for pt in points:
            order = self.order_at(pt)
            if order is not None and order < 0:
                out[pt] = -order
        return out

    def partial_fractions(self) -> Tuple[LaurentPoly, Dict[int, List[int]]]:
        """
        Unique decomposition f = L(t) + sum_lam sum_j c_{lam,j} (t - lam)^-j.

        Returns:
            (Laurent part, {lam: [c_{lam,1}, ..., c_{lam,b}]}) with poles in
            ascending order of lam
        """
        F = self.field
        principal: Dict[int, List[int]] = {}
        remainder = self
        for lam, b in self.denominator:
            coeffs = self._principal_part(lam, b)
            principal[lam] = coeffs
            for j, c in enumerate(coeffs, start=1):
                if c:
                    term = RationalFunction.constant(F, c).divide_by_linear(lam, j)
                    remainder = remainder - term
        if remainder.denominator:
            raise ArithmeticError("partial fraction remainder kept a finite pole")
        return remainder.numerator, principal

    def _principal_part(self, lam: int, b: int) -> List[int]:
        # Taylor-expand g = (t - lam)^b f around lam; c_j is the coefficient of s^(b-j), s = t - lam
        F = self.field
        others = {mu: k for mu, k in self.denominator if mu != lam}
        num = self.numerator
        shift = num.offset
        poly = F.from_array(num.coeffs)
        taylor_num = _taylor_shift(F, poly, lam, b)
        # t^shift around lam
        if shift >= 0:
            t_part = _taylor_shift(F, F.poly_pow([0, 1], shift), lam, b)
        else:
            t_part = _series_inverse(F, _taylor_shift(F, F.poly_pow([0, 1], -shift), lam, b), b)
        series = _series_mul(F, taylor_num, t_part, b)
        for mu, k in others.items():
            factor = _taylor_shift(F, F.poly_pow([F.neg(mu), 1], k), lam, b)
            series = _series_mul(F, series, _series_inverse(F, factor, b), b)
        return [series[b - j] for j in range(1, b + 1)]

    def evaluate(self, point: int) -> int:
        """Value at a field element that is not a pole."""
        F = self.field
        value = self.numerator.evaluate(point)
        for lam, k in self.denominator:
            d = F.sub(point, lam)
            if d == 0:
                raise ZeroDivisionError(f"pole at {F.format(lam)}")
            value = F.div(value, F.pow(d, k))
        return value


def _taylor_shift(F: FqContext, poly: Sequence[int], lam: int, precision: int) -> List[int]:
    """First `precision` coefficients of poly(s + lam) in s."""
    coeffs = list(poly)
    out = []
    for _ in range(precision):
        if not coeffs:
            out.append(0)
            continue
        # Horner division by (t - lam): the remainder is the next Taylor coefficient
        quotient = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = F.add(coeffs[i], F.mul(acc, lam))
            quotient[i - 1] = acc
        out.append(F.add(coeffs[0], F.mul(acc, lam)))
        coeffs = quotient
    return out


def _series_mul(F: FqContext, a: Sequence[int], b: Sequence[int], precision: int) -> List[int]:
    out = [0] * precision
    for i, u in enumerate(a[:precision]):
        if u:
            for j, v in enumerate(b[:precision - i]):
                if v:
                    out[i + j] = F.add(out[i + j], F.mul(u, v))
    return out


def _series_inverse(F: FqContext, a: Sequence[int], precision: int) -> List[int]:
    if not a or a[0] == 0:
        raise ZeroDivisionError("power series with zero constant term is not invertible")
    inv0 = F.inv(a[0])
    out = [inv0] + [0] * (precision - 1)
    for k in range(1, precision):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = F.add(acc, F.mul(a[j], out[k - j]))
        out[k] = F.neg(F.mul(acc, inv0))
    return out


class RationalFunctionRing:
    """
    Coefficient-ring adapter exposing F_q(t) to Witt-vector arithmetic.

    Every sum, product, power and Frobenius image is held to a degree window
    of at most window_cap monomials.
    """

    def __init__(self, field: FqContext, window_cap: Optional[int] = None):
        self.field = field
        self.p = field.p
        self.window_cap = window_cap or config.witt_window_cap
        self.zero = RationalFunction.zero(field)
        self.one = RationalFunction.constant(field, 1)

    def __repr__(self) -> str:
        return f"RationalFunctionRing(F_{self.field.q}(t))"

    def _bounded(self, a: RationalFunction) -> RationalFunction:
        if a.window_width > self.window_cap:
            raise WindowOverflowError(
                f"degree window {a.degree_window} spans {a.window_width} monomials, "
                f"cap is {self.window_cap}", required=a.window_width)
        return a

    def add(self, a: RationalFunction, b: RationalFunction) -> RationalFunction:
        return self._bounded(a + b)

    def neg(self, a: RationalFunction) -> RationalFunction:
        return -a

    def mul(self, a: RationalFunction, b: RationalFunction) -> RationalFunction:
        return self._bounded(a * b)

    def pow(self, a: RationalFunction, k: int) -> RationalFunction:
        return self._bounded(a.pow(k))

    def frobenius(self, a: RationalFunction) -> RationalFunction:
        return self._bounded(a.frobenius(1))

    def from_int(self, k: int) -> RationalFunction:
        return RationalFunction.constant(self.field, k % self.p)

    def is_zero(self, a: RationalFunction) -> bool:
        return a.is_zero()
