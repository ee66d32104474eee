"""
Subgroups of finite abelian p-groups carrying a V-filtration.

A FilteredGroup G has a chain G = G_0 > G_1 > ... > G_n = 0 with p G_i in
G_{i+1} and F_p-vector-space quotients G_i/G_{i+1} in explicit coordinates.
SubgroupPresentation eliminates one level at a time: generators in G_i are
put in echelon form on the level-i coordinates, and the kernel combinations
together with p times the echelon elements become the generators of the
intersection with G_{i+1}.

Usage:
    from qfs_heights.subgroup import SubgroupPresentation, WittModuleGroup

    G = WittModuleGroup(p=3, n=2, rank=2)
    S = SubgroupPresentation(G, [G.basis_element(0)])
    S.contains(G.scalar(G.basis_element(0), 4))   # True
"""

import logging
import random
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from typing import Any, Hashable, List, Optional, Sequence, Set

import numpy as np

from qfs_heights.errors import UnsupportedParametersError
from qfs_heights.finite_field import FqContext, get_field
from qfs_heights.linalg import RowEchelon
from qfs_heights.witt import WittRingContext

logger = logging.getLogger(__name__)

BFS_LIMIT = 1 << 16


class FilteredGroup(ABC):
    """A finite abelian p-group with an F_p-graded V-filtration."""

    p: int
    length: int

    @abstractmethod
    def zero(self) -> Any:
        ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any:
        ...

    @abstractmethod
    def neg(self, a: Any) -> Any:
        ...

    @abstractmethod
    def times_p(self, a: Any) -> Any:
        """p * a."""

    @abstractmethod
    def level(self, a: Any) -> int:
        """Largest i with a in G_i; length for zero."""

    @abstractmethod
    def coordinates(self, a: Any, i: int) -> np.ndarray:
        """F_p coordinates of the image of a in G_i/G_{i+1}; a must lie in G_i."""

    @abstractmethod
    def dim(self, i: int) -> int:
        """dim over F_p of G_i/G_{i+1}."""

    @abstractmethod
    def key(self, a: Any) -> Hashable:
        """Hashable canonical form of a."""

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def is_zero(self, a: Any) -> bool:
        return self.level(a) >= self.length

    def scalar(self, a: Any, k: int) -> Any:
        k %= self.p ** self.length
        result, base = self.zero(), a
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def combination(self, elements: Sequence[Any], coeffs: Sequence[int]) -> Any:
        result = self.zero()
        for g, c in zip(elements, coeffs):
            if int(c):
                result = self.add(result, self.scalar(g, int(c)))
        return result

    def log_order(self) -> int:
        """log_p |G|."""
        return sum(self.dim(i) for i in range(self.length))


@dataclass
class EliminationLevel:
    """Echelon data of the subgroup at one filtration level."""
    index: int
    dim: int
    echelon: RowEchelon
    elements: List[Any]
    generator_count: int

    @property
    def rank(self) -> int:
        return self.echelon.rank


class SubgroupPresentation:
    """
    The subgroup generated by a finite list of elements.

    The elimination is done once at construction; membership queries then
    cost one reduction per level.
    """

    def __init__(self, group: FilteredGroup, generators: Sequence[Any]):
        self.group = group
        self.generators = [g for g in generators if not group.is_zero(g)]
        self.levels: List[EliminationLevel] = []

        current = list(self.generators)
        p = group.p
        for i in range(group.length):
            here = [g for g in current if group.level(g) == i]
            later = [g for g in current if group.level(g) > i]
            d = group.dim(i)
            rows = np.array([group.coordinates(g, i) for g in here], dtype=np.int64).reshape(len(here), d)
            echelon = RowEchelon(rows, p, width=d)
            basis = [group.combination(here, row) for row in echelon.transform]
            kernel = [group.combination(here, row) for row in echelon.kernel]
            self.levels.append(EliminationLevel(i, d, echelon, basis, len(here)))
            logger.debug("level %d: dim %d, %d generators, rank %d", i, d, len(here), echelon.rank)

            current = later
            current += [g for g in kernel if not group.is_zero(g)]
            current += [h for h in (group.times_p(b) for b in basis) if not group.is_zero(h)]

    @property
    def ranks(self) -> List[int]:
        return [lvl.rank for lvl in self.levels]

    @property
    def dims(self) -> List[int]:
        return [lvl.dim for lvl in self.levels]

    def log_order(self) -> int:
        """log_p |S|."""
        return sum(self.ranks)

    def quotient_log_order(self) -> int:
        """log_p |G/S|."""
        return sum(d - r for d, r in zip(self.dims, self.ranks))

    def quotient_order(self) -> int:
        return self.group.p ** self.quotient_log_order()

    def contains(self, x: Any) -> bool:
        """Exact membership of x in the subgroup."""
        group = self.group
        for lvl in self.levels:
            if group.is_zero(x):
                return True
            if group.level(x) > lvl.index:
                continue
            coeffs, residue = lvl.echelon.reduce(group.coordinates(x, lvl.index))
            if residue.any():
                return False
            x = group.sub(x, group.combination(lvl.elements, coeffs))
        return group.is_zero(x)


def membership(group: FilteredGroup, generators: Sequence[Any], x: Any) -> bool:
    """Whether x lies in the subgroup generated by generators."""
    return SubgroupPresentation(group, generators).contains(x)


# ----------------------------------------------------------------------
# brute-force oracle

def bfs_closure(group: FilteredGroup, generators: Sequence[Any],
                limit: int = BFS_LIMIT) -> Set[Hashable]:
    """
    Keys of every element of the subgroup, by closing {0} under adding generators.

    Raises:
        UnsupportedParametersError: If the subgroup has more than limit elements
    """
    start = group.zero()
    seen = {group.key(start)}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for g in generators:
            b = group.add(a, g)
            k = group.key(b)
            if k not in seen:
                seen.add(k)
                if len(seen) > limit:
                    raise UnsupportedParametersError(f"subgroup closure exceeds {limit} elements")
                queue.append(b)
    return seen


def bfs_membership(group: FilteredGroup, generators: Sequence[Any], x: Any) -> bool:
    return group.key(x) in bfs_closure(group, generators)


# ----------------------------------------------------------------------
# W_n(F_q)^r

class WittModuleGroup(FilteredGroup):
    """
    The additive group W_n(F_q)^r filtered by V^i.

    Elements are tuples of r Witt vectors; the level-i coordinates are the
    F_p digits of the i-th components.
    """

    def __init__(self, p: int, n: int, rank: int = 1, m: int = 1):
        self.p = p
        self.length = n
        self.rank = rank
        self.field: FqContext = get_field(p, m)
        self.witt = WittRingContext(p, n, self.field)

    def __repr__(self) -> str:
        return f"WittModuleGroup(p={self.p}, n={self.length}, rank={self.rank}, q={self.field.q})"

    def zero(self):
        return tuple(self.witt.zero() for _ in range(self.rank))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def times_p(self, a):
        # p = VF on W(F_q)
        F = self.field
        return tuple(self.witt.vector((0,) + tuple(F.frobenius(c) for c in x.components[:-1]))
                     for x in a)

    def level(self, a) -> int:
        levels = [next((i for i, c in enumerate(x.components) if c), self.length) for x in a]
        return min(levels) if levels else self.length

    def coordinates(self, a, i: int) -> np.ndarray:
        digits: List[int] = []
        for x in a:
            digits.extend(self.field.digits(x.components[i]))
        return np.array(digits, dtype=np.int64)

    def dim(self, i: int) -> int:
        return self.rank * self.field.m

    def key(self, a):
        return tuple(x.components for x in a)

    def element(self, components: Sequence[Sequence[int]]):
        return tuple(self.witt.vector(c) for c in components)

    def basis_element(self, j: int, value: int = 1):
        """The Teichmuller lift [value] in copy j."""
        return tuple(self.witt.teichmuller(value) if k == j else self.witt.zero()
                     for k in range(self.rank))

    def random_element(self, rng: Optional[random.Random] = None):
        rng = rng or random.Random()
        q = self.field.q
        return tuple(self.witt.vector(rng.randrange(q) for _ in range(self.length))
                     for _ in range(self.rank))
