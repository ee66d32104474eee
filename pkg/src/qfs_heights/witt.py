"""
Truncated Witt vectors over F_p-algebras.

The ring structure of W_n comes from universal sum and product polynomials
solved out of the ghost components w_k(a) = sum_{j<=k} p^j a_j^(p^(k-j)).
Solving is done with sympy's sparse polynomial rings, working modulo
p^(k+1) at step k so that only mod-p lifts of earlier polynomials are needed.
Tables are cached on disk through qfs_heights.cache.

Coefficient rings are duck-typed: anything with add/neg/mul/pow/frobenius,
zero/one, from_int and is_zero (FqContext, RationalFunctionRing).

Usage:
    from qfs_heights.witt import WittRingContext

    W = WittRingContext(2, 2)
    a = W.teichmuller(1)
    a + a                     # (0, 1): 2 = V F [1]
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring as poly_ring

from qfs_heights.cache import Poly, cached_polys
from qfs_heights.config import config
from qfs_heights.divisors import PointP1, QDivisor
from qfs_heights.errors import UnsupportedParametersError
from qfs_heights.finite_field import get_field

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# universal polynomials

def _variable_names(n: int, two_sets: bool = True) -> List[str]:
    names = [f'X{i}' for i in range(n)]
    if two_sets:
        names += [f'Y{i}' for i in range(n)]
    return names


def _ghost(p: int, gens: Sequence[Any], k: int):
    """w_k of the Witt vector whose components are the given polynomials."""
    return sum(p ** j * gens[j] ** (p ** (k - j)) for j in range(k + 1))


def _power_p_times(poly, p: int, times: int, modulus: Optional[int]):
    for _ in range(times):
        poly = poly ** p
        if modulus is not None:
            poly = poly.trunc_ground(modulus)
    return poly


def _solve_ghost(p: int, n: int, targets: Callable[[int], Any], exact: bool) -> List[Any]:
    """
    Solve w_k(S) = targets(k) for S_0..S_{n-1}.

    With exact=False each S_k is returned as an integer lift of its reduction
    mod p and all arithmetic at step k is done modulo p^(k+1).
    """
    solutions: List[Any] = []
    for k in range(n):
        modulus = None if exact else p ** (k + 1)
        acc = targets(k)
        if modulus is not None:
            acc = acc.trunc_ground(modulus)
        for j, s in enumerate(solutions):
            acc = acc - p ** j * _power_p_times(s, p, k - j, modulus)
            if modulus is not None:
                acc = acc.trunc_ground(modulus)
        divisor = p ** k
        bad = [c for c in acc.coeffs() if int(c) % divisor]
        assert not bad, f"ghost step {k} for p={p} is not divisible by p^{k}"
        s_k = acc.quo_ground(divisor)
        if not exact:
            s_k = s_k.trunc_ground(p)
        solutions.append(s_k)
    return solutions


def _to_poly(element, p: Optional[int]) -> Poly:
    out: Poly = {}
    for monom, coeff in element.items():
        c = int(coeff)
        if p is not None:
            c %= p
        if c:
            out[tuple(int(e) for e in monom)] = c
    return out


def _check_cost_cap(p: int, n: int) -> None:
    if n < 1:
        raise UnsupportedParametersError(f"Witt length must be >= 1, got {n}")
    if p > config.witt_max_p or n > config.witt_max_n:
        raise UnsupportedParametersError(
            f"unsupported (p, n) = ({p}, {n}): universal polynomials are capped at "
            f"p <= {config.witt_max_p}, n <= {config.witt_max_n}")


def _build_sum_and_product(p: int, n: int, exact: bool) -> Tuple[List[Any], List[Any]]:
    R, *gens = poly_ring(','.join(_variable_names(n)), ZZ)
    X, Y = gens[:n], gens[n:]
    sums = _solve_ghost(p, n, lambda k: _ghost(p, X, k) + _ghost(p, Y, k), exact)

    def product_target(k):
        prod = _ghost(p, X, k) * _ghost(p, Y, k)
        return prod if exact else prod.trunc_ground(p ** (k + 1))

    prods = _solve_ghost(p, n, product_target, exact)
    return sums, prods


@lru_cache(maxsize=None)
def _universal(p: int, n: int) -> Tuple[Tuple[Poly, ...], Tuple[Poly, ...]]:
    def build() -> List[Poly]:
        sums, prods = _build_sum_and_product(p, n, exact=False)
        return [_to_poly(s, p) for s in sums] + [_to_poly(s, p) for s in prods]

    polys = cached_polys('witt_sum_prod', p, n, build)
    return tuple(polys[:n]), tuple(polys[n:])


def gen_universal_polys(p: int, n: int) -> Tuple[List[Poly], List[Poly]]:
    """
    Universal sum and product polynomials of W_n, reduced mod p.

    Variables are ordered X_0..X_{n-1}, Y_0..Y_{n-1}.

    Args:
        p: Prime
        n: Witt length

    Returns:
        (sum polynomials, product polynomials)

    Raises:
        UnsupportedParametersError: If (p, n) exceeds the configured cost cap
    """
    _check_cost_cap(p, n)
    sums, prods = _universal(p, n)
    return list(sums), list(prods)


def integral_universal_polys(p: int, n: int) -> Tuple[List[Poly], List[Poly]]:
    """The same polynomials over Z, unreduced; meant for small (p, n) only."""
    _check_cost_cap(p, n)
    sums, prods = _build_sum_and_product(p, n, exact=True)
    return [_to_poly(s, None) for s in sums], [_to_poly(s, None) for s in prods]


@lru_cache(maxsize=None)
def _inverse(p: int, n: int) -> Tuple[Poly, ...]:
    def build() -> List[Poly]:
        R, *X = poly_ring(','.join(_variable_names(n, two_sets=False)), ZZ)
        negs = _solve_ghost(p, n, lambda k: -_ghost(p, X, k), exact=False)
        return [_to_poly(s, p) for s in negs]

    return tuple(cached_polys('witt_neg', p, n, build))


def inverse_polys(p: int, n: int) -> List[Poly]:
    """Universal additive inverse N with S(X, N(X)) = 0, in variables X_0..X_{n-1}."""
    _check_cost_cap(p, n)
    return list(_inverse(p, n))


@lru_cache(maxsize=None)
def _teichmuller_sums(p: int, n: int) -> Tuple[Poly, ...]:
    def build() -> List[Poly]:
        R, x, y = poly_ring('X,Y', ZZ)
        carries = _solve_ghost(p, n, lambda k: x ** (p ** k) + y ** (p ** k), exact=False)
        return [_to_poly(s, p) for s in carries]

    return tuple(cached_polys('teich_sum', p, n, build))


def teichmuller_sum_polys(p: int, n: int) -> List[Poly]:
    """
    Carries tau_0..tau_{n-1} with [X] + [Y] = (tau_0, tau_1, ..., tau_{n-1}).

    tau_0 = X + Y and tau_j is homogeneous of degree p^j in (X, Y).
    """
    if n < 1:
        raise UnsupportedParametersError(f"Witt length must be >= 1, got {n}")
    return list(_teichmuller_sums(p, n))


def binary_form_terms(poly: Poly) -> List[Tuple[int, int, int]]:
    """(a, b, coeff) terms of a bivariate polynomial, sorted by a."""
    return sorted((a, b, c) for (a, b), c in poly.items())


def dump_universal_polys(p: int, n: int) -> str:
    """Plain-text listing of the universal polynomials (coefficients mod p)."""
    sums, prods = gen_universal_polys(p, n)
    names = _variable_names(n)
    lines = [f"# universal Witt polynomials p={p} n={n}"]
    for label, polys in (('S', sums), ('P', prods)):
        for k, poly in enumerate(polys):
            lines.append(f"{label}{k} = {_format_poly(poly, names)}")
    return '\n'.join(lines) + '\n'


def _format_poly(poly: Poly, names: Sequence[str]) -> str:
    if not poly:
        return '0'
    terms = []
    for monom, coeff in sorted(poly.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True):
        factors = [name if e == 1 else f'{name}^{e}' for name, e in zip(names, monom) if e]
        body = '*'.join(factors) or '1'
        terms.append(body if coeff == 1 else f'{coeff}*{body}')
    return ' + '.join(terms)


# ----------------------------------------------------------------------
# evaluation

class _CompiledPoly:
    """A polynomial prepared for repeated evaluation over a coefficient ring."""

    def __init__(self, poly: Poly):
        self.terms = [(coeff, [(i, e) for i, e in enumerate(monom) if e])
                      for monom, coeff in sorted(poly.items())]

    def evaluate(self, ring, values: Sequence[Any], powers: Dict[Tuple[int, int], Any]):
        acc = ring.zero
        for coeff, factors in self.terms:
            term = ring.from_int(coeff)
            for i, e in factors:
                if ring.is_zero(values[i]):
                    term = ring.zero
                    break
                key = (i, e)
                if key not in powers:
                    powers[key] = ring.pow(values[i], e)
                term = ring.mul(term, powers[key])
            if not ring.is_zero(term):
                acc = ring.add(acc, term)
        return acc


class WittRingContext:
    """
    W_n over a coefficient ring of characteristic p.

    Polynomial tables are generated lazily; the context is read-only once
    they are built and can be shared freely.
    """

    def __init__(self, p: int, n: int, ring=None):
        """
        Args:
            p: Prime
            n: Witt length (>= 1)
            ring: Coefficient ring; F_p when omitted

        Raises:
            UnsupportedParametersError: If (p, n) exceeds the cost cap
        """
        _check_cost_cap(p, n)
        self.p = p
        self.n = n
        self.ring = ring if ring is not None else get_field(p)
        if getattr(self.ring, 'p', p) != p:
            raise UnsupportedParametersError(
                f"coefficient ring has characteristic {self.ring.p}, expected {p}")

    def __repr__(self) -> str:
        return f"WittRingContext(p={self.p}, n={self.n}, ring={self.ring!r})"

    @cached_property
    def _sum(self) -> List[_CompiledPoly]:
        return [_CompiledPoly(s) for s in gen_universal_polys(self.p, self.n)[0]]

    @cached_property
    def _prod(self) -> List[_CompiledPoly]:
        return [_CompiledPoly(s) for s in gen_universal_polys(self.p, self.n)[1]]

    @cached_property
    def _neg(self) -> List[_CompiledPoly]:
        return [_CompiledPoly(s) for s in inverse_polys(self.p, self.n)]

    def with_length(self, n: int) -> 'WittRingContext':
        """The context of length n over the same coefficient ring."""
        return _context_for(self.p, n, self.ring)

    def vector(self, components: Iterable[Any]) -> 'WittVector':
        comps = tuple(components)
        if len(comps) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(comps)}")
        return WittVector(self, comps)

    def zero(self) -> 'WittVector':
        return WittVector(self, (self.ring.zero,) * self.n)

    def one(self) -> 'WittVector':
        return self.teichmuller(self.ring.one)

    def teichmuller(self, c: Any) -> 'WittVector':
        return WittVector(self, (c,) + (self.ring.zero,) * (self.n - 1))

    def _apply(self, polys: List[_CompiledPoly], values: Sequence[Any]) -> Tuple[Any, ...]:
        powers: Dict[Tuple[int, int], Any] = {}
        return tuple(poly.evaluate(self.ring, values, powers) for poly in polys)


@lru_cache(maxsize=None)
def _context_for(p: int, n: int, ring) -> WittRingContext:
    return WittRingContext(p, n, ring)


@dataclass(frozen=True, eq=False)
class WittVector:
    """A length-n Witt vector (a_0, ..., a_{n-1})."""
    ctx: WittRingContext
    components: Tuple[Any, ...]

    @property
    def n(self) -> int:
        return len(self.components)

    def _check(self, other: 'WittVector') -> None:
        if self.ctx.p != other.ctx.p or self.n != other.n or self.ctx.ring != other.ctx.ring:
            raise ValueError("Witt vectors live in different rings")

    def __add__(self, other: 'WittVector') -> 'WittVector':
        self._check(other)
        return WittVector(self.ctx, self.ctx._apply(self.ctx._sum, self.components + other.components))

    def __mul__(self, other: 'WittVector') -> 'WittVector':
        self._check(other)
        return WittVector(self.ctx, self.ctx._apply(self.ctx._prod, self.components + other.components))

    def __neg__(self) -> 'WittVector':
        ring = self.ctx.ring
        if self.ctx.p == 2:
            return WittVector(self.ctx, self.ctx._apply(self.ctx._neg, self.components))
        # -1 = [-1] for odd p, and [c](a_0, a_1, ...) = (c a_0, c^p a_1, ...)
        return WittVector(self.ctx, tuple(ring.neg(a) for a in self.components))

    def __sub__(self, other: 'WittVector') -> 'WittVector':
        return self + (-other)

    def scalar(self, k: int) -> 'WittVector':
        """k * a by double-and-add."""
        if k < 0:
            return (-self).scalar(-k)
        result, base = self.ctx.zero(), self
        while k:
            if k & 1:
                result = result + base
            k >>= 1
            if k:
                base = base + base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        if (self.ctx.p, self.n, self.ctx.ring) != (other.ctx.p, other.n, other.ctx.ring):
            return False
        return all(a == b for a, b in zip(self.components, other.components))

    def __hash__(self) -> int:
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(self.ctx.ring.is_zero(a) for a in self.components)

    def frobenius(self) -> 'WittVector':
        ring = self.ctx.ring
        return WittVector(self.ctx, tuple(ring.frobenius(a) for a in self.components))

    def verschiebung(self) -> 'WittVector':
        """V: W_n -> W_{n+1}, (a_0, ..., a_{n-1}) -> (0, a_0, ..., a_{n-1})."""
        target = self.ctx.with_length(self.n + 1)
        return WittVector(target, (self.ctx.ring.zero,) + self.components)

    def restriction(self) -> 'WittVector':
        """R: W_n -> W_{n-1}, dropping the last component."""
        if self.n < 2:
            raise ValueError("restriction needs length >= 2")
        return WittVector(self.ctx.with_length(self.n - 1), self.components[:-1])

    def satisfies_divisor(self, D: QDivisor, ignore: Iterable[PointP1] = ()) -> bool:
        """
        Check that slot i lies in O(floor(p^i D)) away from the ignored points.

        Components without pole data (field constants) have order 0 everywhere.
        """
        skip = set(ignore)
        for i, a in enumerate(self.components):
            bound = D.scale(self.ctx.p ** i).floor()
            if self.ctx.ring.is_zero(a):
                continue
            if hasattr(a, 'pole_orders'):
                points = set(a.pole_orders()) | set(bound.support())
                for pt in points - skip:
                    order = a.order_at(pt)
                    if order is not None and order < -bound[pt]:
                        return False
            elif any(bound[pt] < 0 for pt in set(bound.support()) - skip):
                return False
        return True

    def __repr__(self) -> str:
        return f"WittVector({', '.join(map(repr, self.components))})"


# ----------------------------------------------------------------------
# operations under their conventional names

def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return a + b


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return a * b


def witt_neg(a: WittVector) -> WittVector:
    return -a


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    return a - b


def witt_scalar(a: WittVector, k: int) -> WittVector:
    return a.scalar(k)


def frobenius_W(a: WittVector) -> WittVector:
    return a.frobenius()


def verschiebung(a: WittVector) -> WittVector:
    return a.verschiebung()


def restriction(a: WittVector) -> WittVector:
    return a.restriction()


def teichmuller(c: Any, ctx: WittRingContext) -> WittVector:
    return ctx.teichmuller(c)


def satisfies_divisor(a: WittVector, D: QDivisor, ignore: Iterable[PointP1] = ()) -> bool:
    return a.satisfies_divisor(D, ignore)


def ghost_vector(p: int, components: Sequence[int]) -> List[int]:
    """Ghost components of an integer Witt vector."""
    return [sum(p ** j * components[j] ** (p ** (k - j)) for j in range(k + 1))
            for k in range(len(components))]


def evaluate_integral(poly: Poly, values: Sequence[int]) -> int:
    """Evaluate an integral polynomial at integer values."""
    total = 0
    for monom, coeff in poly.items():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term *= v ** e
        total += term
    return total
