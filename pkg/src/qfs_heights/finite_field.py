"""
Finite fields F_q = F_p[g]/(modulus) with deterministic modulus choice.

Elements are plain ints 0 <= a < q holding the base-p digits of the power
basis: a = c_0 + c_1 p + ... + c_{m-1} p^(m-1) stands for sum c_i g^i.
Fields up to 2^16 elements use log/antilog tables; larger ones multiply
digit polynomials directly.

Usage:
    from qfs_heights.finite_field import get_field

    F = get_field(5, 2)          # F_25, modulus x^2 + 2
    a = F.parse('2g+1')
    b = F.mul(a, F.inv(a))       # == F.one
"""

import logging
import re
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.abc import x as _x

from qfs_heights.errors import FieldError

logger = logging.getLogger(__name__)

TABLE_LIMIT = 1 << 16

_TERM_RE = re.compile(r'^([+-]?)(\d*)\*?(g(?:\^(\d+))?)?$')


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """
    Irreducibility over F_p of the monic polynomial x^m + c_{m-1}x^{m-1} + ... + c_0.

    Args:
        coeffs: Low-to-high coefficients c_0..c_{m-1} (leading 1 implied)
        p: Prime

    Returns:
        True if irreducible
    """
    m = len(coeffs)
    if m == 1:
        return True
    poly = sympy.Poly([1] + list(reversed(coeffs)), _x, modulus=p)
    return bool(poly.is_irreducible)


def smallest_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible of degree m over F_p.

    Candidates are ordered by (c_{m-1}, ..., c_0); the returned tuple is the
    low-to-high coefficient list without the leading 1.
    """
    if m == 1:
        return (0,)
    for code in range(p ** m):
        coeffs = tuple((code // p ** i) % p for i in range(m))
        if coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


class FqContext:
    """
    Arithmetic in F_{p^m}.

    The context is immutable after construction and safe to share.
    """

    def __init__(self, p: int, m: int = 1):
        """
        Initialize the field.

        Args:
            p: Prime characteristic
            m: Extension degree (>= 1)

        Raises:
            FieldError: If p is not prime or m < 1
        """
        if not isinstance(p, int) or not sympy.isprime(p):
            raise FieldError(f"characteristic must be prime, got {p!r}")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")

        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus: Tuple[int, ...] = smallest_irreducible(p, m)
        self.zero = 0
        self.one = 1

        self._exp: Optional[List[int]] = None
        self._log: Optional[Dict[int, int]] = None
        if m > 1 and self.q <= TABLE_LIMIT:
            self._build_tables()

        # Matrices used by numpy polynomial arithmetic
        self.reduction = np.array([self.digits(self._power_of_g(k))
                                   for k in range(2 * m - 1)], dtype=np.int64)
        self.frobenius_matrix = np.array(
            [self.digits(self.frobenius(self._power_of_g(i))) for i in range(m)],
            dtype=np.int64)

    def __repr__(self) -> str:
        return f"FqContext(p={self.p}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FqContext) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    def __reduce__(self):
        return (get_field, (self.p, self.m))

    # ------------------------------------------------------------------
    # digits

    def digits(self, a: int) -> List[int]:
        """Power-basis coordinates c_0..c_{m-1} of a."""
        p = self.p
        return [(a // p ** i) % p for i in range(self.m)]

    def from_digits(self, coeffs: Sequence[int]) -> int:
        """Element with the given power-basis coordinates (reduced mod p)."""
        p = self.p
        return sum((int(c) % p) * p ** i for i, c in enumerate(coeffs))

    def from_int(self, k: int) -> int:
        """Image of an integer in the prime field."""
        return k % self.p

    def elements(self) -> Iterator[int]:
        """All field elements in encoding order."""
        return iter(range(self.q))

    def is_zero(self, a: int) -> bool:
        return a == 0

    def prime_field_basis(self) -> List[int]:
        """The F_p-basis 1, g, ..., g^(m-1)."""
        return [self.p ** i for i in range(self.m)]

    # ------------------------------------------------------------------
    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([u + v for u, v in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.from_digits([-u for u in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, u in enumerate(da):
            if u:
                for j, v in enumerate(db):
                    prod[i + j] += u * v
        # x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1})
        for k in range(2 * m - 2, m - 1, -1):
            top = prod[k] % p
            if top:
                for i, c in enumerate(self.modulus):
                    prod[k - m + i] -= top * c
            prod[k] = 0
        return self.from_digits(prod[:m])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return (a * b) % self.p
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._slow_mul(a, b)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        if self.m == 1:
            return pow(a, k, self.p)
        if self._log is not None:
            return self._exp[(self._log[a] * k) % (self.q - 1)]
        result, base = 1, a
        while k:
            if k & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        if self.m == 1 or a == 0:
            return a
        return self.pow(a, self.p ** (k % self.m))

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def _power_of_g(self, k: int) -> int:
        if self.m == 1:
            return 1
        result = 1
        for _ in range(k):
            result = self._slow_mul(result, self.p)
        return result

    def _build_tables(self) -> None:
        order = self.q - 1
        factors = sympy.primefactors(order)
        for g in range(2, self.q):
            if all(self.pow(g, order // r) != 1 for r in factors):
                break
        else:
            raise FieldError(f"no primitive element found in F_{self.q}")
        exp, log = [0] * order, {}
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = self._slow_mul(cur, g)
        # publish together so mul() never sees half-built tables
        self._exp, self._log = exp, log
        logger.debug("built log tables for F_%d with generator %d", self.q, g)

    # ------------------------------------------------------------------
    # polynomials over F_q given as low-to-high coefficient lists

    def poly_mul(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    if v:
                        out[i + j] = self.add(out[i + j], self.mul(u, v))
        return out

    def poly_pow(self, a: Sequence[int], k: int) -> List[int]:
        result: List[int] = [1]
        base = list(a)
        while k:
            if k & 1:
                result = self.poly_mul(result, base)
            base = self.poly_mul(base, base)
            k >>= 1
        return result

    def poly_eval(self, a: Sequence[int], point: int) -> int:
        acc = 0
        for c in reversed(a):
            acc = self.add(self.mul(acc, point), c)
        return acc

    def roots(self, a: Sequence[int]) -> List[int]:
        """All roots in F_q of a polynomial, by exhaustion."""
        if self.q > 100_000:
            raise FieldError(f"root search by exhaustion limited to q <= 100000, got {self.q}")
        return [r for r in self.elements() if self.poly_eval(a, r) == 0]

    # ------------------------------------------------------------------
    # literals

    def parse(self, literal: str) -> int:
        """
        Parse a field literal such as '3', '-1', 'g', '2g+1' or 'g^2+4'.

        Raises:
            FieldError: On malformed input or a 'g' term in a prime field
        """
        text = literal.replace(' ', '')
        if not text:
            raise FieldError("empty field literal")
        terms = re.findall(r'[+-]?[^+-]+', text)
        if ''.join(terms) != text:
            raise FieldError(f"malformed field literal {literal!r}")
        coeffs = [0] * max(self.m, 1)
        for term in terms:
            match = _TERM_RE.match(term)
            if not match or (not match.group(2) and not match.group(3)):
                raise FieldError(f"malformed field literal {literal!r}")
            sign = -1 if match.group(1) == '-' else 1
            coeff = int(match.group(2)) if match.group(2) else 1
            degree = 0
            if match.group(3) and self.m == 1:
                raise FieldError(f"'g' has no meaning in the prime field F_{self.p}: {literal!r}")
            if match.group(3):
                degree = int(match.group(4)) if match.group(4) else 1
            if degree >= self.m:
                value = self.mul(self.from_int(sign * coeff), self._power_of_g(degree))
                coeffs = [c + d for c, d in zip(coeffs, self.digits(value))]
            else:
                coeffs[degree] += sign * coeff
        return self.from_digits(coeffs)

    def format(self, a: int) -> str:
        """Render an element in the literal syntax accepted by parse()."""
        if self.m == 1:
            return str(a)
        parts = []
        for i, c in reversed(list(enumerate(self.digits(a)))):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                base = 'g' if i == 1 else f'g^{i}'
                parts.append(base if c == 1 else f'{c}{base}')
        return '+'.join(parts) if parts else '0'

    # ------------------------------------------------------------------
    # numpy bridges

    def to_array(self, elems: Sequence[int]) -> np.ndarray:
        """Shape (len, m) digit array of a coefficient sequence."""
        if self.m == 1:
            return np.asarray(list(elems), dtype=np.int64).reshape(-1, 1) % self.p
        return np.array([self.digits(a) for a in elems], dtype=np.int64).reshape(-1, self.m)

    def from_array(self, arr: np.ndarray) -> List[int]:
        """Inverse of to_array."""
        if self.m == 1:
            return [int(v) for v in arr[:, 0]]
        weights = np.array([self.p ** i for i in range(self.m)], dtype=object)
        return [int(row.astype(object) @ weights) for row in arr]


@lru_cache(maxsize=None)
def get_field(p: int, m: int = 1) -> FqContext:
    """Shared field context for (p, m); modulus selection is deterministic."""
    return FqContext(p, m)
