"""Exact rational linear algebra, cross-checked against sympy."""

import itertools
import random
from fractions import Fraction

import sympy

from wcontact.linalg import MatrixQ, rank_kernel


class TestBasics:
    def test_identity_rank(self):
        M = MatrixQ([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        rank, kernel = rank_kernel(M)
        assert rank == 3 and kernel == []

    def test_zero_matrix(self):
        M = MatrixQ([[0, 0, 0], [0, 0, 0]])
        rank, kernel = rank_kernel(M)
        assert rank == 0 and len(kernel) == 3

    def test_dependent_column(self):
        M = MatrixQ([[1, 0, 1], [0, 1, 1]])
        rank, kernel = rank_kernel(M)
        assert rank == 2
        assert len(kernel) == 1
        v = kernel[0]
        assert M.mul_vector(v) == [0, 0]
        # kernel vector proportional to (1, 1, -1)
        scale = v[0]
        assert [x / scale for x in v] == [1, 1, -1]

    def test_kernel_vectors_exact(self):
        M = MatrixQ([[Fraction(1, 3), Fraction(2, 7)],
                     [Fraction(2, 3), Fraction(4, 7)]])
        for v in M.kernel_basis():
            assert M.mul_vector(v) == [0, 0]

    def test_column_space_contains(self):
        M = MatrixQ([[1, 0], [0, 1], [1, 1]])
        assert M.column_space_contains([1, 2, 3])
        assert not M.column_space_contains([0, 0, 1])

    def test_hstack_and_transpose(self):
        M = MatrixQ([[1, 2], [3, 4]])
        N = M.hstack(MatrixQ([[5], [6]]))
        assert N.ncols == 3 and N.rows[0] == [1, 2, 5]
        assert M.transpose().rows == [[1, 3], [2, 4]]


def _sympy_rank(rows):
    return sympy.Matrix(rows).rank()


class TestSympyCrossCheck:
    def test_exhaustive_2x2(self):
        values = range(-2, 3)
        for entries in itertools.product(values, repeat=4):
            rows = [list(entries[:2]), list(entries[2:])]
            assert MatrixQ(rows).rank() == _sympy_rank(rows)

    def test_random_up_to_4x4(self):
        rng = random.Random(2024)
        for _ in range(300):
            nr, nc = rng.randint(1, 4), rng.randint(1, 4)
            rows = [[rng.randint(-2, 2) for _ in range(nc)]
                    for _ in range(nr)]
            M = MatrixQ(rows)
            assert M.rank() == _sympy_rank(rows)
            rank, kernel = rank_kernel(M)
            assert rank + len(kernel) == nc
            for v in kernel:
                assert M.mul_vector(v) == [0] * nr

    def test_random_rational_entries(self):
        rng = random.Random(7)
        for _ in range(100):
            rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                     for _ in range(3)] for _ in range(3)]
            assert MatrixQ(rows).rank() == \
                sympy.Matrix([[sympy.Rational(x.numerator, x.denominator)
                               for x in r] for r in rows]).rank()
