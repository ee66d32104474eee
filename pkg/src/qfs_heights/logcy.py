"""
Log Calabi-Yau pairs (P^1, Delta) with standard coefficients.

Delta has degree 2 and coefficients in {1} and {1 - 1/n}; up to the choice of
points it is one of

    i    2/3, 2/3, 2/3          iv   1/2, 1/2, 1/2, 1/2
    ii   1/2, 3/4, 3/4          v    1, 1/2, 1/2
    iii  1/2, 2/3, 5/6          vi   1, 1

Heights are only assigned for i-iv (floor(Delta) = 0). Two routes are
provided: the congruence table, and a cover route that reads the height off
an elliptic curve covering the pair (or, where no odd-characteristic cover
exists, off the vanishing of H^1 or the direct verifier).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar, Dict, List, Optional, Tuple

from qfs_heights.config import config
from qfs_heights.dieudonne import ExceedsBound, Finite, HeightResult, Infinite
from qfs_heights.divisors import INFINITY, ONE, ZERO, PointP1, QDivisor, cartier_power_exists, vanishing_table
from qfs_heights.elliptic import (
    cover_curve_for_case,
    cross_ratio,
    elliptic_height,
    legendre_curve,
    legendre_hasse_value,
)
from qfs_heights.errors import MissingSupportError, UnresolvedHeightError, UnsupportedParametersError
from qfs_heights.finite_field import FqContext, get_field
from qfs_heights.qfs_direct import NotSplit, Split, height_search

logger = logging.getLogger(__name__)

VANISHING_DEPTH = 10

_HALF, _THIRD2, _QUARTER3, _SIXTH5 = Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(5, 6)

CASE_COEFFICIENTS: Dict[str, Tuple[Fraction, ...]] = {
    'i': (_THIRD2, _THIRD2, _THIRD2),
    'ii': (_HALF, _QUARTER3, _QUARTER3),
    'iii': (_HALF, _THIRD2, _SIXTH5),
    'iv': (_HALF, _HALF, _HALF, _HALF),
    'v': (_HALF, _HALF, Fraction(1)),
    'vi': (Fraction(1), Fraction(1)),
}

TREATED_CASES = ('i', 'ii', 'iii', 'iv')


@dataclass(frozen=True)
class LogCYClass:
    """Classification of (P^1, delta)."""
    delta: QDivisor
    case: ClassVar[str] = ''

    @property
    def treated(self) -> bool:
        """True for cases i-iv, the ones with floor(delta) = 0."""
        return self.case in TREATED_CASES

    @property
    def points(self) -> Tuple[PointP1, ...]:
        """Support ordered by coefficient, then by point."""
        return tuple(pt for pt, _ in sorted(self.delta.items(), key=lambda item: (item[1], item[0].sort_key())))


@dataclass(frozen=True)
class CaseI(LogCYClass):
    case: ClassVar[str] = 'i'


@dataclass(frozen=True)
class CaseII(LogCYClass):
    case: ClassVar[str] = 'ii'


@dataclass(frozen=True)
class CaseIII(LogCYClass):
    case: ClassVar[str] = 'iii'


@dataclass(frozen=True)
class CaseIV(LogCYClass):
    case: ClassVar[str] = 'iv'


@dataclass(frozen=True)
class CaseV(LogCYClass):
    case: ClassVar[str] = 'v'


@dataclass(frozen=True)
class CaseVI(LogCYClass):
    case: ClassVar[str] = 'vi'


@dataclass(frozen=True)
class NotLogCY(LogCYClass):
    reason: str = ''
    case: ClassVar[str] = 'none'


_CASE_TYPES = {cls.case: cls for cls in (CaseI, CaseII, CaseIII, CaseIV, CaseV, CaseVI)}


def is_standard(c: Fraction) -> bool:
    """c = 1 or c = 1 - 1/n for some n >= 2."""
    return c == 1 or (0 < c < 1 and c.numerator == c.denominator - 1)


def classify(delta: QDivisor) -> LogCYClass:
    """Match the coefficient multiset of delta against cases i-vi."""
    bad = [c for c in delta.coefficients() if not is_standard(c)]
    if bad:
        return NotLogCY(delta, f"non-standard coefficient {bad[0]}")
    if delta.degree() != 2:
        return NotLogCY(delta, f"degree {delta.degree()} != 2")
    signature = tuple(sorted(delta.coefficients()))
    for case, coeffs in CASE_COEFFICIENTS.items():
        if signature == tuple(sorted(coeffs)):
            return _CASE_TYPES[case](delta)
    return NotLogCY(delta, f"coefficients {signature} match no case")


def case_divisor(case: str, lam: Optional[int] = None) -> QDivisor:
    """
    Standard model of a case: points 0, 1, inf (and lam for case iv),
    assigned coefficients in the order listed in CASE_COEFFICIENTS.
    """
    if case not in CASE_COEFFICIENTS:
        raise UnsupportedParametersError(f"unknown case {case!r}")
    points: List[PointP1] = [ZERO, ONE, INFINITY]
    if case == 'iv':
        if lam is None:
            raise MissingSupportError("case iv needs its fourth point")
        points.append(PointP1.rational(lam))
    elif case == 'vi':
        points = [ZERO, INFINITY]
    return QDivisor.from_mapping(list(zip(points, CASE_COEFFICIENTS[case])))


def _require_treated(cls: LogCYClass) -> None:
    if isinstance(cls, NotLogCY):
        raise UnsupportedParametersError(f"{cls.delta} is not log Calabi-Yau: {cls.reason}")
    if not cls.treated:
        raise UnsupportedParametersError(f"case {cls.case} has floor(delta) != 0; no height is assigned")


def _legendre_parameter(cls: LogCYClass, field: FqContext) -> int:
    points = cls.points
    if any(pt.is_labeled for pt in points):
        raise MissingSupportError("case iv depends on Supp(delta); give the points as field elements")
    return cross_ratio(points, field)


def height_from_table(cls: LogCYClass, p: int, e: int, field: Optional[FqContext] = None) -> HeightResult:
    """
    Height by the congruence table.

    Case iv in odd characteristic is decided by the Legendre Hasse polynomial
    at the cross ratio of its support.

    Raises:
        UnsupportedParametersError: For cases without a height
        MissingSupportError: For case iv with symbolic points
    """
    _require_treated(cls)
    case = cls.case
    if case == 'i':
        if p == 3:
            return Infinite("table: case i, p = 3")
        return Finite(1) if p % 3 == 1 else Finite(e + 1)
    if case == 'ii':
        if p == 2:
            return Infinite("table: case ii, p = 2")
        return Finite(1) if p % 4 == 1 else Finite(e + 1)
    if case == 'iii':
        if p in (2, 3):
            return Infinite(f"table: case iii, p = {p}")
        return Finite(1) if p % 3 == 1 else Finite(e + 1)
    if p == 2:
        return Infinite("table: case iv, p = 2")
    field = field or get_field(p)
    lam = _legendre_parameter(cls, field)
    return Finite(e + 1) if legendre_hasse_value(lam, field) == 0 else Finite(1)


def height_via_cover(cls: LogCYClass, p: int, e: int, field: Optional[FqContext] = None) -> HeightResult:
    """
    Height through a cover of degree prime to p.

    Without such a cover (no s with (p^s - 1) delta Cartier), the pair is
    certified not quasi-F-split when H^1(floor(p^r (K + delta))) vanishes for
    r <= VANISHING_DEPTH. Case i in characteristic 2 has a tame cover only by
    a curve of characteristic 2 and is sent to the direct verifier, or to the
    table when e is beyond the direct verifier's limits.

    Raises:
        UnresolvedHeightError: If neither route applies
    """
    _require_treated(cls)
    field = field or get_field(p)
    if cartier_power_exists(cls.delta, p) is None:
        table = vanishing_table(cls.delta, p, VANISHING_DEPTH)
        if all(h1 == 0 for _, h1 in table):
            return Infinite(f"H^1(floor(p^r(K+delta))) = 0 for r <= {VANISHING_DEPTH}")
        raise UnresolvedHeightError(
            f"case {cls.case} at p={p}: no tame cover and H^1 does not vanish ({table})")

    if cls.case == 'i' and p == 2:
        return _direct_height(cls, p, e, field)
    if cls.case == 'iv':
        curve = legendre_curve(_legendre_parameter(cls, field), field)
    else:
        curve = cover_curve_for_case(cls.case, p, field)
    logger.debug("case %s p=%d: cover %s", cls.case, p, curve)
    return elliptic_height(curve, e)


def _direct_height(cls: LogCYClass, p: int, e: int, field: FqContext) -> HeightResult:
    if e > config.direct_max_e or e + 1 > config.direct_max_n:
        logger.warning("case %s p=%d e=%d is beyond the direct verifier; using the table",
                       cls.case, p, e)
        return height_from_table(cls, p, e, field)
    # three points can be moved to 0, 1, inf
    delta = QDivisor.from_mapping(list(zip((ZERO, ONE, INFINITY), (c for _, c in cls.delta.items()))))
    verdict = height_search(p, delta, e, e + 1, field)
    if isinstance(verdict, Split):
        return Finite(verdict.n)
    if isinstance(verdict, NotSplit):
        return ExceedsBound(verdict.n)
    raise UnresolvedHeightError(f"direct verifier inconclusive: {verdict.report}")


def quasi_f_split_dichotomy(delta: QDivisor, p: int) -> bool:
    """Quasi-F-split iff (p^s - 1) delta is Cartier for some s >= 1."""
    return cartier_power_exists(delta, p) is not None
