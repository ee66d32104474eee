"""
Exact Q-divisor calculus on the projective line.

Provides:
- Points of P^1 (rational over F_q, the point at infinity, or symbolic labels)
- QDivisor with floor, ceiling, fractional part and scaling
- Riemann-Roch dimensions on P^1
- The Cartier-index and vanishing checks used for log Calabi-Yau pairs
- The e-step conditions and the perturbation schedule for log Fano pairs
- The divisor literal grammar used on the command line

K_{P^1} enters formula-level operations only through its degree -2.

Usage:
    from qfs_heights.divisors import parse_divisor, vanishing_table

    delta = parse_divisor('1/2:0,2/3:1,5/6:inf')
    vanishing_table(delta, 2, 10)   # [(1, 0), (2, 0), ...]
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from sympy.ntheory import n_order

from qfs_heights.errors import DivisorError, DivisorLiteralError, FieldError, NotLogFanoError
from qfs_heights.finite_field import FqContext

logger = logging.getLogger(__name__)

CANONICAL_DEGREE = -2

_KIND_ORDER = {'rational': 0, 'infinity': 1, 'labeled': 2}


@dataclass(frozen=True)
class PointP1:
    """A closed point of P^1: a rational point, infinity, or a symbolic label."""
    kind: str
    value: int = 0
    label: str = ''

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise DivisorError(f"unknown point kind {self.kind!r}")

    @classmethod
    def rational(cls, value: int) -> 'PointP1':
        return cls('rational', value=value)

    @classmethod
    def labeled(cls, label: str) -> 'PointP1':
        if not label:
            raise DivisorError("point label must be non-empty")
        return cls('labeled', label=label)

    @property
    def is_infinity(self) -> bool:
        return self.kind == 'infinity'

    @property
    def is_rational(self) -> bool:
        return self.kind == 'rational'

    @property
    def is_labeled(self) -> bool:
        return self.kind == 'labeled'

    def sort_key(self) -> Tuple[int, int, str]:
        return (_KIND_ORDER[self.kind], self.value, self.label)

    def __lt__(self, other: 'PointP1') -> bool:
        return self.sort_key() < other.sort_key()

    def format(self, field: Optional[FqContext] = None) -> str:
        if self.is_infinity:
            return 'inf'
        if self.is_labeled:
            return f'@{self.label}'
        return field.format(self.value) if field is not None else str(self.value)

    def __str__(self) -> str:
        return self.format()


INFINITY = PointP1('infinity')
ZERO = PointP1.rational(0)
ONE = PointP1.rational(1)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class QDivisor:
    """
    A Q-divisor on P^1 as a finite map from points to exact rationals.

    Terms are kept sorted by point with zero coefficients dropped, so two
    divisors are equal exactly when their dataclass fields are.
    """
    terms: Tuple[Tuple[PointP1, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Union[Mapping[PointP1, Rational],
                                         Iterable[Tuple[PointP1, Rational]]]) -> 'QDivisor':
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: Dict[PointP1, Fraction] = {}
        for point, coeff in items:
            acc[point] = acc.get(point, Fraction(0)) + Fraction(coeff)
        return cls(tuple(sorted(((pt, c) for pt, c in acc.items() if c != 0),
                                key=lambda item: item[0].sort_key())))

    @classmethod
    def zero(cls) -> 'QDivisor':
        return cls(())

    def coefficient(self, point: PointP1) -> Fraction:
        for pt, c in self.terms:
            if pt == point:
                return c
        return Fraction(0)

    def __getitem__(self, point: PointP1) -> Fraction:
        return self.coefficient(point)

    def items(self) -> Iterator[Tuple[PointP1, Fraction]]:
        return iter(self.terms)

    def support(self) -> List[PointP1]:
        return [pt for pt, _ in self.terms]

    def coefficients(self) -> List[Fraction]:
        return [c for _, c in self.terms]

    def degree(self) -> Fraction:
        return sum(self.coefficients(), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.coefficients())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients())

    def _map(self, fn) -> 'QDivisor':
        return QDivisor.from_mapping([(pt, fn(c)) for pt, c in self.terms])

    def floor(self) -> 'QDivisor':
        return self._map(lambda c: Fraction(math.floor(c)))

    def ceil(self) -> 'QDivisor':
        return self._map(lambda c: Fraction(math.ceil(c)))

    def frac(self) -> 'QDivisor':
        return self._map(lambda c: c - math.floor(c))

    def scale(self, r: Rational) -> 'QDivisor':
        r = Fraction(r)
        return self._map(lambda c: c * r)

    def __add__(self, other: 'QDivisor') -> 'QDivisor':
        return QDivisor.from_mapping(list(self.terms) + list(other.terms))

    def __neg__(self) -> 'QDivisor':
        return self._map(lambda c: -c)

    def __sub__(self, other: 'QDivisor') -> 'QDivisor':
        return self + (-other)

    def __le__(self, other: 'QDivisor') -> bool:
        return (other - self).is_zero() or all(c > 0 for c in (other - self).coefficients())

    def __str__(self) -> str:
        return format_divisor(self)


# ----------------------------------------------------------------------
# coefficientwise operations under their conventional names

def floor_div(D: QDivisor) -> QDivisor:
    return D.floor()


def ceil_div(D: QDivisor) -> QDivisor:
    return D.ceil()


def frac_div(D: QDivisor) -> QDivisor:
    return D.frac()


def scale(D: QDivisor, r: Rational) -> QDivisor:
    return D.scale(r)


def degree(D: QDivisor) -> Fraction:
    return D.degree()


def support(D: QDivisor) -> List[PointP1]:
    return D.support()


def is_effective(D: QDivisor) -> bool:
    return D.is_effective()


def add(D1: QDivisor, D2: QDivisor) -> QDivisor:
    return D1 + D2


# ----------------------------------------------------------------------
# Riemann-Roch on P^1

def h0_dim(d: int) -> int:
    """dim H^0(P^1, O(d))."""
    return max(0, d + 1)


def h1_dim(d: int) -> int:
    """dim H^1(P^1, O(d))."""
    return max(0, -d - 1)


def twisted_floor_degree(delta: QDivisor, p: int, r: int) -> int:
    """deg floor(p^r (K + delta)) = -2 p^r + sum floor(p^r c)."""
    scale_ = p ** r
    return CANONICAL_DEGREE * scale_ + sum(math.floor(c * scale_) for c in delta.coefficients())


# ----------------------------------------------------------------------
# Cartier index and vanishing

def cartier_power_exists(D: QDivisor, p: int) -> Optional[int]:
    """
    Least s >= 1 with (p^s - 1) D integral, or None if no such s exists.

    Args:
        D: Q-divisor
        p: Prime

    Returns:
        The exponent s, or None when some denominator is divisible by p
    """
    denominators = [c.denominator for c in D.coefficients()]
    if any(b % p == 0 for b in denominators):
        return None
    modulus = reduce(math.lcm, denominators, 1)
    if modulus == 1:
        return 1
    return int(n_order(p, modulus))


def vanishing_table(delta: QDivisor, p: int, r_max: int) -> List[Tuple[int, int]]:
    """
    Rows (r, h^1(floor(p^r (K + delta)))) for r = 1..r_max.

    Raises:
        DivisorError: If r_max < 1
    """
    if r_max < 1:
        raise DivisorError(f"r_max must be >= 1, got {r_max}")
    return [(r, h1_dim(twisted_floor_degree(delta, p, r))) for r in range(1, r_max + 1)]


def fractional_period(D: QDivisor, p: int) -> Tuple[int, int]:
    """
    Certificate (preperiod, period) for the sequence f -> {p^f D}.

    For f >= preperiod, {p^f D} = {p^(f + period) D}.
    """
    preperiod, period = 0, 1
    for c in D.coefficients():
        b = c.denominator
        v = 0
        while b % p == 0:
            b //= p
            v += 1
        preperiod = max(preperiod, v)
        if b > 1:
            period = math.lcm(period, int(n_order(p, b)))
    return preperiod, period


def _frobenius_splits(B: QDivisor) -> bool:
    # O -> F_* O(B) splits for effective B with 0 <= coefficients < p supported
    # on at most two points: move them to 0 and infinity and use the toric
    # splitting t^j -> t^(j/p).
    return len(B.support()) <= 2


@dataclass
class EStepConditions:
    """Conditions (2) and (3) of the e-to-(e+1) step over a certified range of f."""
    f_values: List[int]
    cond2: List[bool]
    cond3: List[bool]
    certificate: Tuple[int, int]
    unresolved: List[int] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(self.cond2) and all(self.cond3)


def lemma_e_step_conditions(delta: QDivisor, p: int, e: int) -> EStepConditions:
    """
    Evaluate the conditions that lift n-quasi-F^e-splitting to every f >= e.

    cond2[f]: H^0(floor(p^f (K + delta))) = 0.
    cond3[f]: F: O -> F_* O(floor(p {p^f delta})) splits; decided by the
    sufficient two-point test. Failures of that test are listed in
    `unresolved` since a general splitting test is not implemented.

    The range of f covers one full period of {p^f delta} past its preperiod,
    which by periodicity covers every f >= e.
    """
    preperiod, period = fractional_period(delta, p)
    start = e
    stop = max(e, preperiod) + period
    f_values = list(range(start, stop))

    cond2, cond3, unresolved = [], [], []
    for f in f_values:
        cond2.append(h0_dim(twisted_floor_degree(delta, p, f)) == 0)
        B = delta.scale(p ** f).frac().scale(p).floor()
        splits = _frobenius_splits(B)
        if not splits:
            unresolved.append(f)
            logger.warning("splitting of O -> F_*O(%s) needs a general test (f=%d)", B, f)
        cond3.append(splits)

    return EStepConditions(f_values, cond2, cond3, (preperiod, period), unresolved)


# ----------------------------------------------------------------------
# perturbation schedule for log Fano pairs

@dataclass
class FanoSchedule:
    """
    Certificate data reducing quasi-F^e-splitting of (P^1, delta + eps E) for
    all e to one base verification and the e-step conditions.
    """
    p: int
    nu: int
    delta: QDivisor
    E: QDivisor
    delta_prime: QDivisor
    e_bar2: QDivisor
    mus: List[int]
    epsilon: Fraction
    n_max: int
    conditions: EStepConditions

    @property
    def target(self) -> QDivisor:
        """The pair whose splitting is verified: delta' + Ebar_2."""
        return self.delta_prime + self.e_bar2

    @property
    def base_checks(self) -> List[Tuple[int, int]]:
        """(n, e) base verifications: n = 1..n_max at e = nu."""
        return [(n, self.nu) for n in range(1, self.n_max + 1)]


def _is_log_fano(delta: QDivisor) -> bool:
    return delta.floor().is_zero() and delta.degree() + CANONICAL_DEGREE < 0


def fano_perturbation_schedule(delta: QDivisor, E: QDivisor, p: int,
                               n_max: int = 2) -> FanoSchedule:
    """
    Build the perturbation schedule for a log Fano pair (P^1, delta).

    Args:
        delta: Effective boundary with floor(delta) = 0 and deg(K + delta) < 0
        E: Effective perturbation direction
        p: Prime
        n_max: Witt length the base case is verified up to

    Returns:
        FanoSchedule

    Raises:
        NotLogFanoError: If (P^1, delta) is not log Fano or E is not effective
    """
    if not delta.is_zero() and not delta.is_effective():
        raise NotLogFanoError(f"boundary {delta} is not effective")
    if not _is_log_fano(delta):
        raise NotLogFanoError(f"(P^1, {delta}) is not log Fano")
    if not E.is_zero() and not E.is_effective():
        raise NotLogFanoError(f"perturbation {E} is not effective")

    # smallest nu with delta' = sum (alpha + 1)/p^nu P log Fano, alpha = ceil(c p^nu)
    nu = 1
    while True:
        scale_ = p ** nu
        delta_prime = QDivisor.from_mapping(
            [(pt, Fraction(math.ceil(c * scale_) + 1, scale_)) for pt, c in delta.items()])
        if _is_log_fano(delta_prime):
            break
        nu += 1

    supp = set(delta.support())
    E1 = QDivisor.from_mapping([(pt, c) for pt, c in E.items() if pt in supp])
    E2 = QDivisor.from_mapping([(pt, c) for pt, c in E.items() if pt not in supp])

    eps1 = Fraction(1)
    for pt, b in E1.items():
        eps1 = min(eps1, (delta_prime[pt] - delta[pt]) / b)

    mus: List[int] = []
    e_bar2 = QDivisor.zero()
    epsilon = eps1
    if not E2.is_zero():
        max_b = max(E2.coefficients())
        eps2 = Fraction(1, p ** (nu + n_max - 1) * (math.ceil(max_b) + 1))
        prev = nu
        for pt, b in E2.items():
            mu = prev + 1
            while Fraction(1, p ** mu) > eps2 * b:
                mu += 1
            mus.append(mu)
            prev = mu
        while True:
            e_bar2 = QDivisor.from_mapping(
                [(pt, Fraction(1, p ** mu)) for (pt, _), mu in zip(E2.items(), mus)])
            if _is_log_fano(delta_prime + e_bar2):
                break
            mus = [mu + 1 for mu in mus]
        for (pt, b), mu in zip(E2.items(), mus):
            epsilon = min(epsilon, Fraction(1, p ** mu) / b)

    assert delta + E.scale(epsilon) <= delta_prime + e_bar2

    conditions = lemma_e_step_conditions(delta_prime + e_bar2, p, nu)
    logger.debug("fano schedule p=%d nu=%d mus=%s eps=%s", p, nu, mus, epsilon)
    return FanoSchedule(p=p, nu=nu, delta=delta, E=E, delta_prime=delta_prime,
                        e_bar2=e_bar2, mus=mus, epsilon=epsilon, n_max=n_max,
                        conditions=conditions)


# ----------------------------------------------------------------------
# literal grammar

def _parse_coefficient(text: str, literal: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DivisorLiteralError(f"bad coefficient {text!r} in divisor literal {literal!r}")


def parse_point(text: str, field: Optional[FqContext] = None) -> PointP1:
    """Parse `inf`, `@label` or a field literal into a point."""
    text = text.strip()
    if text in ('inf', '∞'):
        return INFINITY
    if text.startswith('@'):
        return PointP1.labeled(text[1:])
    if field is None:
        try:
            return PointP1.rational(int(text))
        except ValueError:
            raise DivisorLiteralError(f"point {text!r} needs a field context")
    try:
        return PointP1.rational(field.parse(text))
    except FieldError as e:
        raise DivisorLiteralError(f"bad point {text!r}: {e}")


def parse_divisor(literal: str, field: Optional[FqContext] = None) -> QDivisor:
    """
    Parse a literal such as `2/3:0,2/3:1,2/3:inf` or `1/2:@P,1/2:@Q`.

    `0` and the empty string denote the zero divisor.

    Raises:
        DivisorLiteralError: On malformed terms or repeated points
    """
    text = literal.strip()
    if text in ('', '0'):
        return QDivisor.zero()

    seen = set()
    terms = []
    for part in text.split(','):
        if ':' not in part:
            raise DivisorLiteralError(f"term {part!r} is not of the form coeff:point in {literal!r}")
        coeff_text, point_text = part.split(':', 1)
        point = parse_point(point_text, field)
        if point in seen:
            raise DivisorLiteralError(f"point {point_text.strip()!r} repeated in {literal!r}")
        seen.add(point)
        terms.append((point, _parse_coefficient(coeff_text.strip(), literal)))
    return QDivisor.from_mapping(terms)


def format_divisor(D: QDivisor, field: Optional[FqContext] = None) -> str:
    """Render a divisor in the literal grammar accepted by parse_divisor()."""
    if D.is_zero():
        return '0'
    return ','.join(f'{c}:{pt.format(field)}' for pt, c in D.items())
