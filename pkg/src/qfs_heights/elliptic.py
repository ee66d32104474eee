"""
Elliptic curves y^2 = f(x) over F_q in odd characteristic.

Only the ordinary/supersingular decision is implemented: the Hasse invariant
of y^2 = f(x) is the coefficient of x^(p-1) in f^((p-1)/2). Curves built here
serve as double or cyclic covers of (P^1, Delta) whose height they share.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from qfs_heights.dieudonne import HeightResult, abelian_height
from qfs_heights.divisors import PointP1
from qfs_heights.errors import (
    DivisorError,
    ExcludedCharacteristicError,
    FieldError,
    SingularCurveError,
    UnsupportedParametersError,
)
from qfs_heights.finite_field import FqContext, get_field

logger = logging.getLogger(__name__)

# characteristics where each log CY case has no tame cover by an elliptic curve
EXCLUDED_PRIMES = {'i': (3,), 'ii': (2,), 'iii': (2, 3)}


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a x^2 + b x + c over a field of odd characteristic."""
    field: FqContext
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.field.p == 2:
            raise ExcludedCharacteristicError("curves in characteristic 2 are not supported")
        if discriminant(self) == 0:
            raise SingularCurveError(f"{self} is singular")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def cubic(self) -> List[int]:
        """f as a low-to-high coefficient list."""
        return [self.c, self.b, self.a, 1]

    def over(self, field: FqContext) -> 'WeierstrassCurve':
        """The same curve over another field of the same characteristic."""
        if field.p != self.p:
            raise FieldError(f"cannot move a curve from characteristic {self.p} to {field.p}")
        if any(v >= self.p for v in (self.a, self.b, self.c)) and field.m != self.field.m:
            raise FieldError("only curves defined over the prime field can change field")
        return WeierstrassCurve(field, self.a, self.b, self.c)

    def __str__(self) -> str:
        F = self.field
        return f"y^2 = x^3 + ({F.format(self.a)})x^2 + ({F.format(self.b)})x + ({F.format(self.c)})"


def discriminant(C: WeierstrassCurve) -> int:
    """Discriminant of the cubic: a^2b^2 - 4b^3 - 4a^3c - 27c^2 + 18abc."""
    F = C.field
    a, b, c = C.a, C.b, C.c

    def k(n: int) -> int:
        return F.from_int(n)

    terms = [
        F.mul(F.mul(a, a), F.mul(b, b)),
        F.mul(k(-4), F.pow(b, 3)),
        F.mul(k(-4), F.mul(F.pow(a, 3), c)),
        F.mul(k(-27), F.mul(c, c)),
        F.mul(k(18), F.mul(F.mul(a, b), c)),
    ]
    total = 0
    for t in terms:
        total = F.add(total, t)
    return total


def hasse_invariant(C: WeierstrassCurve) -> int:
    """Coefficient of x^(p-1) in f(x)^((p-1)/2); zero iff C is supersingular."""
    p = C.p
    power = C.field.poly_pow(C.cubic, (p - 1) // 2)
    return power[p - 1] if p - 1 < len(power) else 0


def is_supersingular(C: WeierstrassCurve) -> bool:
    return hasse_invariant(C) == 0


def p_rank(C: WeierstrassCurve) -> int:
    return 0 if is_supersingular(C) else 1


def elliptic_height(C: WeierstrassCurve, e: int) -> HeightResult:
    """1 for ordinary curves, e + 1 for supersingular ones."""
    return abelian_height(1, p_rank(C), e)


# ----------------------------------------------------------------------
# Legendre form

def legendre_curve(lam: int, field: FqContext) -> WeierstrassCurve:
    """
    y^2 = x(x - 1)(x - lam).

    Raises:
        SingularCurveError: If lam is 0 or 1
    """
    if lam in (0, 1):
        raise SingularCurveError(f"Legendre parameter must avoid 0 and 1, got {field.format(lam)}")
    a = field.neg(field.add(1, lam))
    return WeierstrassCurve(field, a, lam, 0)


def legendre_hasse_poly(p: int) -> List[int]:
    """Coefficients of sum_{i <= m} C(m, i)^2 x^i mod p, m = (p - 1)/2."""
    if p == 2:
        raise ExcludedCharacteristicError("the Legendre family needs odd characteristic")
    m = (p - 1) // 2
    return [math.comb(m, i) ** 2 % p for i in range(m + 1)]


def legendre_hasse_value(lam: int, field: FqContext) -> int:
    """The Hasse polynomial at lam; zero exactly for supersingular parameters."""
    return field.poly_eval(legendre_hasse_poly(field.p), lam)


def supersingular_parameters(field: FqContext) -> List[int]:
    """Roots of the Hasse polynomial in the field."""
    return field.roots(legendre_hasse_poly(field.p))


def cross_ratio(points: Sequence[PointP1], field: FqContext) -> int:
    """
    Image of the fourth point under the Mobius map sending the first three
    to 0, 1 and infinity.

    Raises:
        DivisorError: Unless given four distinct non-symbolic points
    """
    if len(points) != 4:
        raise DivisorError(f"cross ratio needs four points, got {len(points)}")
    if len(set(points)) != 4:
        raise DivisorError("cross ratio needs distinct points")
    if any(pt.is_labeled for pt in points):
        raise DivisorError("cross ratio needs coordinates, not labels")

    F = field
    p1, p2, p3, z = points
    if p1.is_infinity:
        num, den = F.sub(p2.value, p3.value), F.sub(z.value, p3.value)
    elif p2.is_infinity:
        num, den = F.sub(z.value, p1.value), F.sub(z.value, p3.value)
    elif p3.is_infinity:
        num, den = F.sub(z.value, p1.value), F.sub(p2.value, p1.value)
    elif z.is_infinity:
        num, den = F.sub(p2.value, p3.value), F.sub(p2.value, p1.value)
    else:
        num = F.mul(F.sub(z.value, p1.value), F.sub(p2.value, p3.value))
        den = F.mul(F.sub(z.value, p3.value), F.sub(p2.value, p1.value))
    return F.div(num, den)


# ----------------------------------------------------------------------
# covers of the log CY cases

def cover_curve_for_case(case: str, p: int, field: Optional[FqContext] = None) -> WeierstrassCurve:
    """
    Representative elliptic cover for log CY cases i-iii.

    Cases i and iii use the j = 0 curve y^2 = x^3 + 1, case ii the j = 1728
    curve y^2 = x^3 + x. Case iv depends on its support; use legendre_curve.

    Raises:
        ExcludedCharacteristicError: If p divides the cover degree or p = 2
        UnsupportedParametersError: For an unknown case
    """
    if case not in EXCLUDED_PRIMES:
        raise UnsupportedParametersError(f"no fixed cover for case {case!r}")
    if p in EXCLUDED_PRIMES[case] or p == 2:
        raise ExcludedCharacteristicError(f"case {case} has no elliptic cover in characteristic {p}")
    field = field or get_field(p)
    if case == 'ii':
        return WeierstrassCurve(field, 0, 1, 0)
    return WeierstrassCurve(field, 0, 0, 1)
