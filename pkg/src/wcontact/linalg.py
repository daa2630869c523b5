"""Exact rational matrices with rank, kernel and column-space routines."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


class MatrixQ:
    """Dense matrix over Q with optional semantic row/column labels."""

    __slots__ = ("rows", "nrows", "ncols", "row_labels", "col_labels")

    def __init__(self, rows: Sequence[Sequence], row_labels=None, col_labels=None):
        self.rows: List[List[Fraction]] = [[Fraction(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
        self.row_labels = list(row_labels) if row_labels else None
        self.col_labels = list(col_labels) if col_labels else None

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "MatrixQ":
        return cls([[0] * ncols for _ in range(nrows)])

    def transpose(self) -> "MatrixQ":
        return MatrixQ([[self.rows[i][j] for i in range(self.nrows)]
                        for j in range(self.ncols)],
                       row_labels=self.col_labels, col_labels=self.row_labels)

    def hstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return MatrixQ([self.rows[i] + other.rows[i] for i in range(self.nrows)],
                       row_labels=self.row_labels)

    def mul_vector(self, v: Sequence) -> List[Fraction]:
        v = [Fraction(x) for x in v]
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        return [sum((r[j] * v[j] for j in range(self.ncols)), Fraction(0))
                for r in self.rows]

    def rref(self) -> Tuple["MatrixQ", List[int]]:
        """Reduced row echelon form and the pivot column indices."""
        m = [row[:] for row in self.rows]
        pivots: List[int] = []
        r = 0
        for c in range(self.ncols):
            pivot = next((i for i in range(r, self.nrows) if m[i][c]), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            pv = m[r][c]
            m[r] = [x / pv for x in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return MatrixQ(m, col_labels=self.col_labels), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> List[List[Fraction]]:
        """Basis of {v : M v = 0}; exact."""
        rref, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -rref.rows[r][f]
            basis.append(v)
        return basis

    def column_space_contains(self, v: Sequence) -> bool:
        aug = self.hstack(MatrixQ([[x] for x in v]))
        return aug.rank() == self.rank()

    def __repr__(self):
        return f"MatrixQ({self.nrows}x{self.ncols})"


def rank_kernel(M: MatrixQ) -> Tuple[int, List[List[Fraction]]]:
    """Rank and an exact kernel basis; rank + kernel dimension = ncols."""
    kernel = M.kernel_basis()
    return M.ncols - len(kernel), kernel
