"""
Direct verification of n-quasi-F^e-splitting of (P^1, Delta).

(P^1, Delta) is n-quasi-F^e-split exactly when
    H^1(O(K + Delta)) -> H^1(Q^e_{K+Delta, n}),   x -> F^e[x],
is injective, where Q^e is W_n O(p^e(K + Delta)) modulo V F^e W_{n-1} O(p(K + Delta)).
Both sides are computed with Cech cochains on U0 = P^1 - {inf} and
U1 = P^1 - {0}.

A section of O(F) on the overlap is written L / Pi_F with L a Laurent
polynomial and Pi_F = prod_{lam != 0, inf} (t - lam)^{F_lam}. Its class in
H^1(O(F)) is the part of L in degrees (M, -F_0), M = F_inf + sum F_lam.
For Witt vectors, every class of H^1(W_n O(E)) has exactly one
representative sum_k V^k [h_k / Pi_k] with each h_k in the middle range of
floor(p^k E): chart parts are split off level by level and the Teichmuller
carries of each split are pushed to higher levels.

Usage:
    from qfs_heights.divisors import parse_divisor
    from qfs_heights.qfs_direct import height_search

    height_search(5, parse_divisor('2/3:0,2/3:1,2/3:inf'), e=1, n_max=3)   # Split(n=2)
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from qfs_heights.config import config
from qfs_heights.divisors import (
    INFINITY,
    FanoSchedule,
    QDivisor,
    format_divisor,
)
from qfs_heights.errors import (
    DivisorError,
    UnresolvedHeightError,
    UnsupportedParametersError,
    WindowOverflowError,
)
from qfs_heights.finite_field import FqContext, get_field
from qfs_heights.linalg import rank
from qfs_heights.rational_functions import LaurentPoly
from qfs_heights.subgroup import FilteredGroup, SubgroupPresentation
from qfs_heights.witt import binary_form_terms, teichmuller_sum_polys

logger = logging.getLogger(__name__)

CANONICAL = QDivisor.from_mapping({INFINITY: -2})

Element = Tuple[LaurentPoly, ...]


# ----------------------------------------------------------------------
# integral divisors in chart coordinates

def _finite_exponents(divisor: QDivisor) -> Dict[int, int]:
    """F_lam for the finite points lam != 0 of an integral divisor."""
    return {pt.value: int(c) for pt, c in divisor.items() if pt.is_rational and pt.value != 0}


@dataclass(frozen=True)
class LevelData:
    """Chart data of an integral divisor F."""
    divisor: QDivisor
    order_at_zero: int
    finite: Tuple[Tuple[int, int], ...]
    top: int

    @property
    def mid_low(self) -> int:
        return self.top + 1

    @property
    def mid_high(self) -> int:
        return -self.order_at_zero - 1

    @property
    def mid_count(self) -> int:
        return max(0, self.mid_high - self.mid_low + 1)

    @property
    def mid_range(self) -> range:
        return range(self.mid_low, self.mid_high + 1)


def level_data(divisor: QDivisor) -> LevelData:
    """
    Split an integral divisor F into F_0, the finite exponents and
    M = F_inf + sum_{lam != 0, inf} F_lam.
    """
    if not divisor.is_integral():
        raise DivisorError(f"chart data needs an integral divisor, got {divisor}")
    finite = _finite_exponents(divisor)
    order_at_zero = _order_at_zero(divisor)
    top = int(divisor[INFINITY]) + sum(finite.values())
    return LevelData(divisor, order_at_zero, tuple(sorted(finite.items())), top)


def _order_at_zero(divisor: QDivisor) -> int:
    for pt, c in divisor.items():
        if pt.is_rational and pt.value == 0:
            return int(c)
    return 0


@dataclass(frozen=True)
class CechClass:
    """The class of numerator / Pi_F in H^1(O(F))."""
    divisor: QDivisor
    numerator: LaurentPoly

    def __add__(self, other: 'CechClass') -> 'CechClass':
        if self.divisor != other.divisor:
            raise DivisorError("Cech classes of different sheaves cannot be added")
        return CechClass(self.divisor, self.numerator + other.numerator)

    def scale(self, c: int) -> 'CechClass':
        return CechClass(self.divisor, self.numerator.scale(c))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()


def h1_basis(D: QDivisor, field: FqContext) -> List[CechClass]:
    """
    F_p-basis c t^s / Pi of H^1(O(floor D)), s in the middle range and c
    running over the power basis of F_q.
    """
    F = D.floor()
    lvl = level_data(F)
    return [CechClass(F, LaurentPoly.monomial(field, c, s))
            for s in lvl.mid_range for c in field.prime_field_basis()]


# ----------------------------------------------------------------------
# the section space H^1(W_n O(E))

@lru_cache(maxsize=None)
def _carry_terms(p: int, n: int) -> Tuple[Tuple[Tuple[int, int, int], ...], ...]:
    return tuple(tuple(binary_form_terms(tau)) for tau in teichmuller_sum_polys(p, n))


class SectionSpace(FilteredGroup):
    """
    H^1(P^1, W_n O(E)) in normal form, filtered by V.

    Elements are tuples (h_0, ..., h_{n-1}) of Laurent polynomials, h_k
    supported in the middle range of floor(p^k E).

    With a slack s, numerators at level k are cut to the middle range
    widened by s * p^k slots on each side before chart parts are split off;
    `truncated` counts the monomials lost that way.
    """

    def __init__(self, field: FqContext, E: QDivisor, n: int, slack: Optional[int] = None,
                 window_cap: Optional[int] = None):
        self.field = field
        self.p = field.p
        self.length = n
        self.E = E
        self.slack = slack
        self.window_cap = window_cap or config.window_cap
        self.levels = [level_data(E.scale(self.p ** k).floor()) for k in range(n)]
        self._taus = _carry_terms(self.p, n)
        self._twists: Dict[Tuple[int, Tuple[Tuple[int, int], ...], int], LaurentPoly] = {}
        self.max_span = 0
        self.truncated = 0

    def __repr__(self) -> str:
        return f"SectionSpace(q={self.field.q}, E={self.E}, n={self.length})"

    # numerators --------------------------------------------------------

    def _check_span(self, L: LaurentPoly) -> None:
        if L.span > self.window_cap:
            raise WindowOverflowError(
                f"numerator span {L.span} exceeds the window cap {self.window_cap}", required=L.span)
        self.max_span = max(self.max_span, L.span)

    def twist(self, level: int, source: Mapping[int, int], power: int) -> LaurentPoly:
        """prod (t - lam)^(F_level,lam - power * source_lam)."""
        key = (level, tuple(sorted(source.items())), power)
        if key not in self._twists:
            target = dict(self.levels[level].finite)
            poly = LaurentPoly.monomial(self.field, 1, 0)
            for lam in sorted(set(target) | set(source)):
                k = target.get(lam, 0) - power * source.get(lam, 0)
                if k < 0:
                    raise DivisorError(f"pole order at {lam} exceeds the level-{level} bound")
                if k:
                    poly = poly * LaurentPoly.linear_power(self.field, lam, k)
            self._twists[key] = poly
        return self._twists[key]

    def lift(self, level: int, numerator: LaurentPoly, source: Mapping[int, int], r: int) -> LaurentPoly:
        """Numerator at `level` of (numerator / Pi_source)^(p^r)."""
        out = numerator.frobenius(r) * self.twist(level, source, self.p ** r)
        self._check_span(out)
        return out

    def _tau(self, i: int, A: LaurentPoly, B: LaurentPoly) -> LaurentPoly:
        pa: Dict[int, LaurentPoly] = {}
        pb: Dict[int, LaurentPoly] = {}
        total = LaurentPoly.zero(self.field)
        for a, b, c in self._taus[i]:
            if a not in pa:
                pa[a] = A.pow(a)
            if b not in pb:
                pb[b] = B.pow(b)
            total = total + (pa[a] * pb[b]).scale(self.field.from_int(c))
        return total

    def _push(self, pending: List[List[LaurentPoly]], level: int, L: LaurentPoly, negate: bool) -> None:
        if level >= self.length or L.is_zero():
            return
        self._check_span(L)
        if not negate:
            pending[level].append(L)
        elif self.p != 2:
            pending[level].append(-L)
        else:
            # -[g] = (g, g^2, g^4, ...) in characteristic 2
            source = dict(self.levels[level].finite)
            pending[level].append(L)
            for l in range(1, self.length - level):
                pending[level + l].append(self.lift(level + l, L, source, l))

    def _push_carries(self, pending: List[List[LaurentPoly]], k: int,
                      A: LaurentPoly, B: LaurentPoly, negate: bool) -> None:
        if A.is_zero() or B.is_zero():
            return
        source = dict(self.levels[k].finite)
        for i in range(1, self.length - k):
            tau = self._tau(i, A, B)
            if not tau.is_zero():
                self._push(pending, k + i, tau * self.twist(k + i, source, self.p ** i), negate)

    def _truncate(self, L: LaurentPoly, level: int) -> LaurentPoly:
        """Drop monomials more than slack * p^level slots outside the middle range."""
        lvl = self.levels[level]
        reach = self.slack * self.p ** level
        kept = L.restrict(lvl.mid_low - reach, lvl.mid_high + reach)
        if kept == L:
            return L
        rest = L.restrict(hi=-lvl.order_at_zero - 1)
        parts = (L.restrict(lo=-lvl.order_at_zero), rest.restrict(lo=lvl.mid_low), rest.restrict(hi=lvl.top))
        if sum(not part.is_zero() for part in parts) < 2:
            # a lone chart part or middle part has no carries, cut or not
            return L
        dropped = L - kept
        self.truncated += int(np.count_nonzero(dropped.coeffs.any(axis=1)))
        return kept

    def normal_form(self, terms: Mapping[int, Sequence[LaurentPoly]]) -> Element:
        """Normal form of sum_k sum_{L in terms[k]} V^k [L / Pi_k]."""
        pending = [[L for L in terms.get(k, ()) if not L.is_zero()] for k in range(self.length)]
        out = []
        for k, lvl in enumerate(self.levels):
            acc = LaurentPoly.zero(self.field)
            for L in pending[k]:
                self._check_span(L)
                self._push_carries(pending, k, acc, L, negate=False)
                acc = acc + L
            if self.slack is not None:
                acc = self._truncate(acc, k)
            # [u0 + h + u1] = [u0] + [h] + [u1] - carries; chart parts vanish in H^1
            high = acc.restrict(lo=-lvl.order_at_zero)
            rest = acc.restrict(hi=-lvl.order_at_zero - 1)
            mid = rest.restrict(lo=lvl.mid_low)
            low = rest.restrict(hi=lvl.top)
            self._push_carries(pending, k, high, rest, negate=True)
            self._push_carries(pending, k, mid, low, negate=True)
            out.append(mid)
        return tuple(out)

    def element(self, level: int, numerator: LaurentPoly) -> Element:
        """Class of V^level [numerator / Pi_level]."""
        return self.normal_form({level: [numerator]})

    def basis_elements(self) -> List[Element]:
        """V^k [c t^s / Pi_k] over every level, middle exponent and F_p-basis element."""
        out = []
        for k, lvl in enumerate(self.levels):
            for s in lvl.mid_range:
                for c in self.field.prime_field_basis():
                    out.append(self.element(k, LaurentPoly.monomial(self.field, c, s)))
        return out

    # FilteredGroup -------------------------------------------------------

    def zero(self) -> Element:
        return tuple(LaurentPoly.zero(self.field) for _ in range(self.length))

    def add(self, a: Element, b: Element) -> Element:
        return self.normal_form({k: [x, y] for k, (x, y) in enumerate(zip(a, b))})

    def neg(self, a: Element) -> Element:
        if self.p != 2:
            return tuple(-h for h in a)
        terms: Dict[int, List[LaurentPoly]] = defaultdict(list)
        for k, h in enumerate(a):
            if h.is_zero():
                continue
            source = dict(self.levels[k].finite)
            terms[k].append(h)
            for l in range(1, self.length - k):
                terms[k + l].append(self.lift(k + l, h, source, l))
        return self.normal_form(terms)

    def times_p(self, a: Element) -> Element:
        # p = V F, and F V^k [g] = V^k [g^p]
        terms: Dict[int, List[LaurentPoly]] = defaultdict(list)
        for k, h in enumerate(a[:-1]):
            if not h.is_zero():
                terms[k + 1].append(self.lift(k + 1, h, dict(self.levels[k].finite), 1))
        return self.normal_form(terms)

    def level(self, a: Element) -> int:
        return next((k for k, h in enumerate(a) if not h.is_zero()), self.length)

    def coordinates(self, a: Element, i: int) -> np.ndarray:
        lvl = self.levels[i]
        return a[i].window(lvl.mid_low, lvl.mid_high)

    def dim(self, i: int) -> int:
        return self.levels[i].mid_count * self.field.m

    def key(self, a: Element):
        return a


# ----------------------------------------------------------------------
# queries

@dataclass(frozen=True)
class SplitQuery:
    """Is (P^1, delta) n-quasi-F^e-split? Points of delta lie in `field` or at infinity."""
    p: int
    delta: QDivisor
    n: int
    e: int
    field: Optional[FqContext] = None
    window: Optional[int] = None

    def __post_init__(self):
        if self.field is None:
            object.__setattr__(self, 'field', get_field(self.p))
        _validate_query(self)

    @property
    def D(self) -> QDivisor:
        """K + delta with K = -2 inf."""
        return self.delta + CANONICAL

    @property
    def E(self) -> QDivisor:
        return self.D.scale(self.p ** self.e)

    @property
    def window_step(self) -> int:
        """(P + 1) p^e, P the number of points of K + delta other than 0."""
        points = 1 + sum(1 for pt in self.delta.support() if pt.is_rational and pt.value != 0)
        return (points + 1) * self.p ** self.e

    @property
    def degree_window(self) -> int:
        """Slack of the section space at level 0; one window step by default."""
        return self.window if self.window is not None else self.window_step

    @property
    def chart_window(self) -> int:
        return min(self.degree_window, self.p ** self.e)

    def with_n(self, n: int) -> 'SplitQuery':
        return SplitQuery(self.p, self.delta, n, self.e, self.field, self.window)


def _validate_query(query: SplitQuery) -> None:
    p, F = query.p, query.field
    if F.p != p:
        raise UnsupportedParametersError(f"field of characteristic {F.p} given for p={p}")
    if query.n < 1 or query.e < 1:
        raise UnsupportedParametersError(f"need n, e >= 1, got n={query.n}, e={query.e}")
    if p > config.direct_max_p or query.n > config.direct_max_n or query.e > config.direct_max_e:
        raise UnsupportedParametersError(
            f"direct verification supports p <= {config.direct_max_p}, n <= {config.direct_max_n}, "
            f"e <= {config.direct_max_e}; got p={p}, n={query.n}, e={query.e}")
    delta = query.delta
    if not delta.is_zero() and not delta.is_effective():
        raise DivisorError(f"boundary {delta} is not effective")
    if not delta.floor().is_zero():
        raise UnsupportedParametersError(f"floor of {delta} is nonzero")
    for pt in delta.support():
        if pt.is_labeled:
            raise DivisorError(f"point {pt} has no coordinates; give its value in F_{F.q}")
        if pt.is_rational and not 0 <= pt.value < F.q:
            raise DivisorError(f"point {pt.value} is not an element of F_{F.q}")


def section_space(query: SplitQuery, window: Optional[int] = None) -> SectionSpace:
    slack = query.degree_window if window is None else window
    return SectionSpace(query.field, query.E, query.n, slack=slack)


def phi_image(x: CechClass, query: SplitQuery, space: Optional[SectionSpace] = None) -> Element:
    """F^e [x] = [x^(p^e)] in H^1(W_n O(p^e (K + delta)))."""
    space = space or section_space(query)
    L = space.lift(0, x.numerator, _finite_exponents(x.divisor), query.e)
    return space.normal_form({0: [L]})


def denominator_generators(query: SplitQuery, space: SectionSpace) -> List[Element]:
    """V F^e V^j [c t^s / Pi] for the H^1 basis of each level j of W_{n-1} O(p(K + delta))."""
    F = query.field
    gens = []
    for j in range(query.n - 1):
        source = query.D.scale(query.p ** (j + 1)).floor()
        lvl = level_data(source)
        exps = _finite_exponents(source)
        for s in lvl.mid_range:
            for c in F.prime_field_basis():
                L = space.lift(j + 1, LaurentPoly.monomial(F, c, s), exps, query.e)
                gens.append(space.element(j + 1, L))
    return gens


def _chart_exponents(lvl: LevelData, window: int) -> List[int]:
    low = range(-lvl.order_at_zero, -lvl.order_at_zero + window)
    high = range(lvl.top - window + 1, lvl.top + 1)
    return sorted(set(low) | set(high))


def chart_generators(query: SplitQuery, space: SectionSpace, window: int) -> List[Element]:
    """
    Images of chart sections: F^e [s] for s on U0 or U1 in O(floor(K + delta)),
    and V^j [s] for chart sections of each level. All of them are zero in H^1.
    """
    F = query.field
    out = []
    base = query.D.floor()
    base_lvl = level_data(base)
    exps = _finite_exponents(base)
    for a in _chart_exponents(base_lvl, window):
        for c in F.prime_field_basis():
            L = space.lift(0, LaurentPoly.monomial(F, c, a), exps, query.e)
            out.append(space.element(0, L))
    for j, lvl in enumerate(space.levels):
        for a in _chart_exponents(lvl, window):
            for c in F.prime_field_basis():
                out.append(space.element(j, LaurentPoly.monomial(F, c, a)))
    return out


def _chart_residues(query: SplitQuery, space: SectionSpace, window: int) -> List[Element]:
    residues = [g for g in chart_generators(query, space, window) if not space.is_zero(g)]
    if residues:
        logger.warning("%d chart sections have nonzero H^1 classes (window %d)", len(residues), window)
    return residues


def coboundary_generators(query: SplitQuery, window: Optional[int] = None,
                          space: Optional[SectionSpace] = None) -> SubgroupPresentation:
    """
    The subgroup S of H^1(W_n O(p^e (K + delta))) whose quotient is H^1(Q^e).

    The class of x dies in H^1(Q^e) iff phi_image(x) lies in S.
    """
    space = space or section_space(query)
    window = query.chart_window if window is None else window
    gens = denominator_generators(query, space) + _chart_residues(query, space, window)
    logger.debug("coboundary generators: %d", len(gens))
    return SubgroupPresentation(space, gens)


def _nonzero_combinations(basis: Sequence[CechClass], p: int) -> List[CechClass]:
    out = []
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        if not any(coeffs):
            continue
        x = None
        for b, a in zip(basis, coeffs):
            if a:
                term = b.scale(b.numerator.field.from_int(a))
                x = term if x is None else x + term
        out.append(x)
    return out


def membership(S: SubgroupPresentation, g: Element) -> bool:
    return S.contains(g)


# ----------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Split:
    n: int
    trace: Tuple[Tuple[int, bool], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True)
class NotSplit:
    n: int
    trace: Tuple[Tuple[int, bool], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return f'>{self.n}'


@dataclass(frozen=True)
class Inconclusive:
    report: str
    trace: Tuple[Tuple[int, bool], ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return 'inconclusive'


SplitVerdict = Union[Split, NotSplit, Inconclusive]


def _injective(query: SplitQuery, space: SectionSpace, S: SubgroupPresentation) -> bool:
    for x in _nonzero_combinations(h1_basis(query.D, query.field), query.p):
        if S.contains(phi_image(x, query, space)):
            logger.debug("class %r dies at n=%d", x.numerator, query.n)
            return False
    return True


def _verdict_at(query: SplitQuery, window: int) -> Tuple[bool, int]:
    """(injective, truncated monomials) with the section space cut at `window`."""
    space = section_space(query, window)
    S = coboundary_generators(query, space=space)
    return _injective(query, space, S), space.truncated


def split_verdict(query: SplitQuery) -> SplitVerdict:
    """
    Split(n) or NotSplit(n) for a single n.

    When the degree window w cut off any monomial, the verdict is recomputed
    at w + window_step; disagreement gives Inconclusive.
    """
    w = query.degree_window
    split, truncated = _verdict_at(query, w)
    if truncated:
        wider = w + query.window_step
        logger.debug("window %d dropped %d monomials, recomputing at %d", w, truncated, wider)
        split_wider, _ = _verdict_at(query, wider)
        if split != split_wider:
            report = f"window {w}: split={split}, window {wider}: split={split_wider}"
            logger.warning("unstable verdict for %s: %s", format_divisor(query.delta, query.field), report)
            return Inconclusive(report)
    logger.info("p=%d e=%d n=%d delta=%s: %s", query.p, query.e, query.n,
                format_divisor(query.delta, query.field), 'split' if split else 'not split')
    return Split(query.n) if split else NotSplit(query.n)


def is_n_quasi_fe_split(query: SplitQuery) -> bool:
    """
    Raises:
        UnresolvedHeightError: If the verdict depends on the chart window
    """
    verdict = split_verdict(query)
    if isinstance(verdict, Inconclusive):
        raise UnresolvedHeightError(verdict.report)
    return isinstance(verdict, Split)


def height_search(p: int, delta: QDivisor, e: int, n_max: int,
                  field: Optional[FqContext] = None, exhaustive: bool = False) -> SplitVerdict:
    """
    Least n <= n_max at which (P^1, delta) is n-quasi-F^e-split.

    The default search stops at the first Split, so its trace is monotone
    by construction. With exhaustive=True every n <= n_max is evaluated and
    the full trace is checked for monotonicity in n.

    Raises:
        UnsupportedParametersError: If n_max exceeds the supported range
        UnresolvedHeightError: If an exhaustive trace is not monotone in n
    """
    if n_max < 1 or n_max > config.direct_max_n:
        raise UnsupportedParametersError(f"n_max must be in 1..{config.direct_max_n}, got {n_max}")
    trace: List[Tuple[int, bool]] = []
    for n in range(1, n_max + 1):
        verdict = split_verdict(SplitQuery(p, delta, n, e, field))
        if isinstance(verdict, Inconclusive):
            return Inconclusive(verdict.report, tuple(trace))
        trace.append((n, isinstance(verdict, Split)))
        if trace[-1][1] and not exhaustive:
            break

    splits = [s for _, s in trace]
    first = splits.index(True) if True in splits else None
    if exhaustive and first is not None and not all(splits[first:]):
        raise UnresolvedHeightError(f"verdicts are not monotone in n: {trace}")
    if first is None:
        return NotSplit(n_max, tuple(trace))
    return Split(trace[first][0], tuple(trace))


def height1_frobenius_test(delta: QDivisor, p: int, e: int, field: Optional[FqContext] = None) -> bool:
    """
    Injectivity of x -> x^(p^e) from H^1(O(floor(K + delta))) to
    H^1(O(floor(p^e (K + delta)))), as an F_p-linear map on Cech classes.
    """
    F = field or get_field(p)
    D = delta + CANONICAL
    source = D.floor()
    target = level_data(D.scale(p ** e).floor())
    src_exps = _finite_exponents(source)
    tgt_exps = dict(target.finite)

    twist = LaurentPoly.monomial(F, 1, 0)
    for lam in sorted(set(src_exps) | set(tgt_exps)):
        k = tgt_exps.get(lam, 0) - p ** e * src_exps.get(lam, 0)
        if k:
            twist = twist * LaurentPoly.linear_power(F, lam, k)

    basis = h1_basis(D, F)
    if not basis:
        return True
    rows = np.array([(b.numerator.frobenius(e) * twist).window(target.mid_low, target.mid_high)
                     for b in basis], dtype=np.int64).reshape(len(basis), target.mid_count * F.m)
    return rank(rows, p, width=target.mid_count * F.m) == len(basis)


def quotient_order(query: SplitQuery) -> int:
    """|H^1(Q^e_{K+delta, n})|."""
    return coboundary_generators(query).quotient_order()


def annihilation_check(query: SplitQuery) -> bool:
    """p^min(e, n) kills H^1(Q^e): checked on every basis element of the section space."""
    space = section_space(query)
    S = coboundary_generators(query, space=space)
    k = min(query.e, query.n)
    for g in space.basis_elements():
        h = g
        for _ in range(k):
            h = space.times_p(h)
        if not S.contains(h):
            return False
    return True


def diagnostics(query: SplitQuery) -> str:
    """Text dump: chart window, per-level dimensions and ranks, generator counts."""
    space = section_space(query)
    S = coboundary_generators(query, space=space)
    lines = [
        f"# direct verifier p={query.p} q={query.field.q} n={query.n} e={query.e} "
        f"delta={format_divisor(query.delta, query.field)}",
        f"chart window: {query.chart_window}",
        f"degree window: {query.degree_window} (step {query.window_step})",
        f"generators: {len(S.generators)}",
    ]
    for lvl_data, lvl in zip(space.levels, S.levels):
        lines.append(
            f"level {lvl.index}: mid [{lvl_data.mid_low}, {lvl_data.mid_high}] "
            f"dim {lvl.dim} generators {lvl.generator_count} rank {lvl.rank}")
    lines.append(f"max numerator span: {space.max_span} (cap {space.window_cap})")
    lines.append(f"truncated monomials: {space.truncated}")
    lines.append(f"log_p |H^1(Q)|: {S.quotient_log_order()}")
    return '\n'.join(lines) + '\n'


def fano_base_check(schedule: FanoSchedule, field: Optional[FqContext] = None) -> Optional[SplitVerdict]:
    """
    Verify the base case of a perturbation schedule: Delta' + Ebar_2 is
    n-quasi-F^nu-split for some n <= n_max. None when outside the supported ranges.
    """
    if (schedule.p > config.direct_max_p or schedule.nu > config.direct_max_e
            or schedule.n_max > config.direct_max_n):
        logger.info("fano base case p=%d nu=%d outside the direct verifier's ranges",
                    schedule.p, schedule.nu)
        return None
    if any(pt.is_labeled for pt in schedule.target.support()):
        return None
    return height_search(schedule.p, schedule.target, schedule.nu, schedule.n_max, field)
