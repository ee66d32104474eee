"""
Linear algebra over F_p on numpy int64 arrays.

Row vectors throughout: a k x d matrix is k vectors of length d. The
reduction is run on [M | I] so the row operations that produce the echelon
form are recorded alongside it.
"""

from typing import List, Optional

import numpy as np


def augment_identity(matrix: np.ndarray) -> np.ndarray:
    """[M | I_k] for a k x d matrix M."""
    k = matrix.shape[0]
    return np.concatenate([matrix, np.eye(k, dtype=np.int64)], axis=1)


class RowEchelon:
    """
    Reduced row echelon form of a set of row vectors over F_p.

    Attributes:
        basis: rank x d reduced rows
        pivots: Pivot column of each basis row
        transform: rank x k; basis = transform @ rows
        kernel: (k - rank) x k; kernel @ rows = 0, a basis of the left kernel
    """

    def __init__(self, rows: np.ndarray, p: int, width: Optional[int] = None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2:
            if rows.size:
                rows = rows.reshape(len(rows), -1)
            else:
                rows = np.zeros((len(rows), width or 0), dtype=np.int64)
        rows = rows % p
        k, d = rows.shape
        self.p = p
        self.width = d
        aug = augment_identity(rows) % p
        pivots: List[int] = []
        r = 0
        for c in range(d):
            if r == k:
                break
            nonzero = np.nonzero(aug[r:, c])[0]
            if len(nonzero) == 0:
                continue
            i = r + nonzero[0]
            if i != r:
                aug[[r, i]] = aug[[i, r]]
            aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
            col = aug[:, c].copy()
            col[r] = 0
            aug = (aug - np.outer(col, aug[r])) % p
            pivots.append(c)
            r += 1
        self.rank = r
        self.pivots = pivots
        self.basis = aug[:r, :d]
        self.transform = aug[:r, d:]
        self.kernel = aug[r:, d:]

    def reduce(self, vector: np.ndarray) -> tuple:
        """
        Split vector into (coefficients on the basis, residue).

        The residue is zero exactly when vector lies in the row span.
        """
        residue = np.asarray(vector, dtype=np.int64) % self.p
        coeffs = np.zeros(self.rank, dtype=np.int64)
        for i, c in enumerate(self.pivots):
            f = residue[c]
            if f:
                coeffs[i] = f
                residue = (residue - f * self.basis[i]) % self.p
        return coeffs, residue

    def solve(self, vector: np.ndarray) -> Optional[np.ndarray]:
        """Coefficients x over the original rows with x @ rows = vector, or None."""
        coeffs, residue = self.reduce(vector)
        if residue.any():
            return None
        if self.rank == 0:
            return np.zeros(self.transform.shape[1], dtype=np.int64)
        return (coeffs @ self.transform) % self.p


def rank(rows: np.ndarray, p: int, width: Optional[int] = None) -> int:
    return RowEchelon(rows, p, width).rank


def left_kernel(rows: np.ndarray, p: int, width: Optional[int] = None) -> np.ndarray:
    """Basis of {x : x @ rows = 0} as the rows of a matrix."""
    return RowEchelon(rows, p, width).kernel
