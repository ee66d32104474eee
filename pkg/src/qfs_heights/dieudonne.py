"""
Heights of Calabi-Yau and abelian varieties through their Dieudonne modules.

The module H of a Calabi-Yau variety with Artin-Mazur height h has a basis
v_1..v_h with V v_i = v_{i+1}, V v_h = p v_1, F v_1 = v_h and
F v_i = p v_{i-1}. The variety is n-quasi-F^e-split exactly when F^e v_1
falls outside V^n H + V F^e H; membership is decided over Z/p^m with a
Howell echelon form.

Usage:
    from qfs_heights.dieudonne import quasi_fe_height

    quasi_fe_height(h=2, p=3, e=3, n_max=5)   # Finite(n=4)
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from qfs_heights.errors import PrecisionError, UnsupportedParametersError

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# height results

@dataclass(frozen=True)
class Finite:
    """n-quasi-F^e-split and not (n-1)-quasi-F^e-split."""
    n: int

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True)
class ExceedsBound:
    """Not n-quasi-F^e-split for any n <= n_max."""
    n_max: int

    def __str__(self) -> str:
        return f'>{self.n_max}'


@dataclass(frozen=True)
class Infinite:
    """Not quasi-F^e-split for any n; the reason names the certifying route."""
    reason: str = field(default='', compare=False)

    def __str__(self) -> str:
        return 'inf'


HeightResult = Union[Finite, ExceedsBound, Infinite]


def parse_height(text: str) -> HeightResult:
    """Inverse of str() on height results: '4', '>6' or 'inf'."""
    text = text.strip()
    if text == 'inf':
        return Infinite()
    if text.startswith('>'):
        return ExceedsBound(int(text[1:]))
    return Finite(int(text))


# ----------------------------------------------------------------------
# the structure module

@dataclass(frozen=True, eq=False)
class DieudonneModule:
    """Free Z/p^m-module of rank h with the structure-theorem F and V."""
    h: int
    m: int
    p: int
    V: np.ndarray
    F: np.ndarray

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return A.dot(B) % self.modulus

    def matpow(self, A: np.ndarray, k: int) -> np.ndarray:
        result = _identity(self.h)
        for _ in range(k):
            result = self.matmul(result, A)
        return result

    def check_relations(self) -> bool:
        """FV = VF = p and F = V^(h-1) over Z/p^m."""
        p_id = (self.p * _identity(self.h)) % self.modulus
        return (np.array_equal(self.matmul(self.F, self.V), p_id)
                and np.array_equal(self.matmul(self.V, self.F), p_id)
                and np.array_equal(self.F, self.matpow(self.V, self.h - 1)))


def _identity(h: int) -> np.ndarray:
    out = np.zeros((h, h), dtype=object)
    for i in range(h):
        out[i, i] = 1
    return out


def structure_module(h: int, m: int, p: int) -> DieudonneModule:
    """
    Build the rank-h module; column j of each matrix is the image of v_{j+1}.

    Raises:
        UnsupportedParametersError: If h < 1 or m < 1
    """
    if h < 1 or m < 1:
        raise UnsupportedParametersError(f"need h >= 1 and m >= 1, got h={h}, m={m}")
    mod = p ** m
    V = np.zeros((h, h), dtype=object)
    F = np.zeros((h, h), dtype=object)
    for i in range(h - 1):
        V[i + 1, i] = 1
    V[0, h - 1] = p % mod
    F[h - 1, 0] = 1
    for i in range(1, h):
        F[i - 1, i] = p % mod
    return DieudonneModule(h=h, m=m, p=p, V=V, F=F)


# ----------------------------------------------------------------------
# linear algebra over Z/p^m

def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows: Sequence[Sequence[int]], p: int, m: int) -> List[List[int]]:
    """
    Echelon form over Z/p^m with pivots p^v in strictly increasing columns.

    After each pivot the row p^(m-v) * pivot is fed back into the pool, so
    the form captures every element of the span with leading zeros.
    """
    mod = p ** m
    pool = [[int(x) % mod for x in r] for r in rows]
    pool = [r for r in pool if any(r)]
    width = len(rows[0]) if len(rows) else 0
    form: List[Tuple[int, int, List[int]]] = []

    for c in range(width):
        candidates = [i for i, r in enumerate(pool) if r[c]]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: _valuation(pool[i][c], p))
        pivot = pool.pop(best)
        v = _valuation(pivot[c], p)
        unit_inv = pow(pivot[c] // p ** v, -1, mod)
        pivot = [(x * unit_inv) % mod for x in pivot]

        reduced = []
        for r in pool:
            if r[c]:
                factor = r[c] // p ** v
                r = [(a - factor * b) % mod for a, b in zip(r, pivot)]
            if any(r):
                reduced.append(r)
        extra = [(p ** (m - v) * x) % mod for x in pivot]
        if any(extra):
            reduced.append(extra)
        pool = reduced
        form.append((c, v, pivot))

    # reduce entries above each pivot modulo the pivot
    for i, (c, v, row) in enumerate(form):
        for j in range(i):
            upper = form[j][2]
            factor = upper[c] // p ** v
            if factor:
                form[j] = (form[j][0], form[j][1],
                           [(a - factor * b) % mod for a, b in zip(upper, row)])
    return [row for _, _, row in form]


def _reduce_against(form: List[List[int]], target: Sequence[int], p: int, m: int) -> List[int]:
    mod = p ** m
    t = [int(x) % mod for x in target]
    for row in form:
        c = next(i for i, x in enumerate(row) if x)
        v = _valuation(row[c], p)
        if t[c] % p ** v:
            return t
        factor = t[c] // p ** v
        t = [(a - factor * b) % mod for a, b in zip(t, row)]
    return t


def submodule_membership(gens: Sequence[Sequence[int]], target: Sequence[int],
                         p: int, m: int) -> bool:
    """
    Decide whether target lies in the Z/p^m-span of gens.

    Args:
        gens: Generator vectors
        target: Vector of the same dimension
        p: Prime
        m: Precision

    Returns:
        True if target is a Z/p^m-combination of gens
    """
    if not any(int(x) % p ** m for x in target):
        return True
    if not gens:
        return False
    return not any(_reduce_against(howell_form(gens, p, m), target, p, m))


# ----------------------------------------------------------------------
# heights

def _check_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise UnsupportedParametersError(f"p must be prime, got {p}")


def _height_at_precision(h: int, p: int, e: int, n_max: int, m: int) -> HeightResult:
    M = structure_module(h, m, p)
    Fe = M.matpow(M.F, e)
    VFe = M.matmul(M.V, Fe)
    target = list(Fe[:, 0])
    Vn = _identity(h)
    for n in range(1, n_max + 1):
        Vn = M.matmul(Vn, M.V)
        gens = [list(Vn[:, j]) for j in range(h)] + [list(VFe[:, j]) for j in range(h)]
        if not submodule_membership(gens, target, p, m):
            return Finite(n)
    return ExceedsBound(n_max)


def quasi_fe_height(h: int, p: int, e: int, n_max: int) -> HeightResult:
    """
    Quasi-F^e-split height of a Calabi-Yau variety of Artin-Mazur height h.

    Precision m = n_max + e + 2; the answer is recomputed at m + 2 and any
    disagreement raises PrecisionError rather than returning a guess.

    Raises:
        UnsupportedParametersError: On non-positive h, e, n_max or non-prime p
        PrecisionError: If the two precisions disagree
    """
    _check_prime(p)
    if h < 1 or e < 1 or n_max < 1:
        raise UnsupportedParametersError(f"need h, e, n_max >= 1, got h={h}, e={e}, n_max={n_max}")
    m = n_max + e + 2
    result = _height_at_precision(h, p, e, n_max, m)
    check = _height_at_precision(h, p, e, n_max, m + 2)
    if result != check:
        raise PrecisionError(
            f"height for h={h}, p={p}, e={e} changed with precision: {result} at m={m}, {check} at m={m + 2}")
    logger.debug("dieudonne h=%d p=%d e=%d -> %s", h, p, e, result)
    return result


def closed_form_height(h: int, e: int) -> int:
    """e h - e + 1."""
    if h < 1 or e < 1:
        raise UnsupportedParametersError(f"need h, e >= 1, got h={h}, e={e}")
    return e * h - e + 1


def cy_height(artin_mazur_height: Optional[int], e: int) -> HeightResult:
    """Height of a Calabi-Yau variety from its Artin-Mazur height (None for infinity)."""
    if artin_mazur_height is None:
        return Infinite("h(X) = inf")
    return Finite(closed_form_height(artin_mazur_height, e))


def abelian_height(g: int, f: int, e: int) -> HeightResult:
    """
    Height of an abelian variety of dimension g and p-rank f.

    Raises:
        UnsupportedParametersError: Unless 0 <= f <= g, g >= 1 and e >= 1
    """
    if g < 1 or e < 1 or not 0 <= f <= g:
        raise UnsupportedParametersError(f"need g >= 1, e >= 1, 0 <= f <= g; got g={g}, f={f}, e={e}")
    if f == g:
        return Finite(1)
    if f == g - 1:
        return Finite(e + 1)
    return Infinite("p-rank <= g-2, so the height of X is infinite")


def uniform_profile(h: int, p: int, e_max: int) -> List[HeightResult]:
    """Heights for e = 1..e_max, each searched up to n = e(h-1) + 2."""
    return [quasi_fe_height(h, p, e, e * (h - 1) + 2) for e in range(1, e_max + 1)]
