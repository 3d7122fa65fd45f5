"""Exact linear algebra: rank, rref, nullspace, rowspace intersection."""

import random
from fractions import Fraction

from subgeneral.linalg import (
    in_rowspace,
    intersect_rowspaces,
    nullspace,
    primitive,
    rank_rows,
    rref,
)

from oracles import rank_fraction_gauss


def rand_matrix(rng, nrows, ncols, hi=6):
    return [[rng.randint(-hi, hi) for _ in range(ncols)] for _ in range(nrows)]


def test_rank_matches_oracle_on_seeded_matrices():
    rng = random.Random(11)
    for _ in range(300):
        m = rand_matrix(rng, rng.randint(1, 6), rng.randint(1, 5))
        assert rank_rows(m) == rank_fraction_gauss(m)


def test_rank_accepts_rational_rows():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]]
    assert rank_rows(rows) == rank_fraction_gauss(rows)


def test_rank_edge_cases():
    assert rank_rows([]) == 0
    assert rank_rows([[0, 0, 0]]) == 0
    assert rank_rows([[1, 0], [0, 1]]) == 2
    assert rank_rows([[1, 2], [2, 4], [3, 6]]) == 1


def test_rref_shape_and_pivots():
    rng = random.Random(12)
    for _ in range(100):
        m = rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        red, pivots = rref([[Fraction(x) for x in row] for row in m])
        assert sorted(pivots) == list(pivots)
        for i, pc in enumerate(pivots):
            assert red[i][pc] == 1
            for j in range(len(pivots)):
                if j != i:
                    assert red[j][pc] == 0
        assert len(pivots) == rank_fraction_gauss(m)


def test_primitive_canonicalizes():
    assert primitive([4, 6, 10]) == (2, 3, 5)
    assert primitive([-4, -6, -10]) == (2, 3, 5)
    assert primitive([0, Fraction(-1, 2)]) == (0, 1)
    assert primitive([Fraction(1, 3), Fraction(1, 6)]) == (2, 1)


def test_nullspace_is_a_kernel_basis():
    rng = random.Random(13)
    for _ in range(200):
        nrows, ncols = rng.randint(1, 4), rng.randint(2, 5)
        m = rand_matrix(rng, nrows, ncols)
        basis = nullspace(m, ncols)
        assert len(basis) == ncols - rank_rows(m)
        for vec in basis:
            for row in m:
                assert sum(a * b for a, b in zip(row, vec)) == 0
        if basis:
            assert rank_rows(basis) == len(basis)


def test_nullspace_of_identity_is_empty():
    assert nullspace([[1, 0], [0, 1]], 2) == []


def test_in_rowspace():
    rows = [[1, 0, 1], [0, 1, 1]]
    assert in_rowspace([1, 1, 2], rows)
    assert in_rowspace([2, -3, -1], rows)
    assert not in_rowspace([0, 0, 1], rows)


def test_intersect_rowspaces_frozen_cases():
    a = [(1, 0, 0), (0, 1, 0)]
    b = [(1, 1, 0), (0, 0, 1)]
    meet = intersect_rowspaces(a, b, 3)
    assert len(meet) == 1
    assert primitive(meet[0]) in ((1, 1, 0),)

    disjoint = intersect_rowspaces([(1, 0, 0)], [(0, 1, 0)], 3)
    assert disjoint == []

    contained = intersect_rowspaces(a, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert len(contained) == 2


def test_intersect_rowspaces_properties():
    rng = random.Random(14)
    for _ in range(150):
        ncols = rng.randint(2, 5)
        a = rand_matrix(rng, rng.randint(1, 3), ncols)
        b = rand_matrix(rng, rng.randint(1, 3), ncols)
        meet = intersect_rowspaces(a, b, ncols)
        for vec in meet:
            assert in_rowspace(vec, a)
            assert in_rowspace(vec, b)
        expected = rank_rows(a) + rank_rows(b) - rank_rows(a + b)
        assert len(meet) == expected
        if meet:
            assert rank_rows(meet) == len(meet)
