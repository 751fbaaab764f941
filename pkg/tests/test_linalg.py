from fractions import Fraction

import pytest

from crkit.linalg import determinant, inverse, rank_and_pivots, solve
from crkit.rational import GaussRational, I, ONE


def G(re, im=0):
    return GaussRational(Fraction(re), Fraction(im))


def test_rank_and_pivots():
    matrix = [
        [G(1), G(2), G(3)],
        [G(2), G(4), G(6)],
        [G(0), G(1), G(1)],
    ]
    rank, rows, cols = rank_and_pivots(matrix)
    assert rank == 2
    assert list(rows) == [0, 2]
    assert list(cols) == [0, 1]


def test_rank_of_zero_and_identity():
    zero = [[G(0), G(0)], [G(0), G(0)]]
    assert rank_and_pivots(zero)[0] == 0
    ident = [[ONE, G(0)], [G(0), ONE]]
    assert rank_and_pivots(ident)[0] == 2


def test_determinant():
    assert determinant([[G(2)]]) == G(2)
    assert determinant([[G(1), G(2)], [G(3), G(4)]]) == G(-2)
    # complex entries: det [[i, 1], [1, i]] = i*i - 1 = -2
    assert determinant([[I, ONE], [ONE, I]]) == G(-2)
    singular = [[G(1), G(2)], [G(2), G(4)]]
    assert determinant(singular) == G(0)


def test_inverse():
    matrix = [[G(1), G(2)], [G(3), G(4)]]
    inv = inverse(matrix)
    assert inv == [
        [G(-2), G(1)],
        [G(Fraction(3, 2)), G(Fraction(-1, 2))],
    ]
    with pytest.raises(ValueError):
        inverse([[G(1), G(2)], [G(2), G(4)]])


def test_solve_unique():
    matrix = [[G(2), G(1)], [G(1), G(-1)]]
    status, x = solve(matrix, [G(5), G(1)])
    assert status == "unique"
    assert x == [G(2), G(1)]


def test_solve_inconsistent():
    matrix = [[G(1), G(1)], [G(2), G(2)]]
    status, x = solve(matrix, [G(1), G(3)])
    assert status == "inconsistent"
    assert x is None


def test_solve_underdetermined():
    matrix = [[G(1), G(1)], [G(2), G(2)]]
    status, x = solve(matrix, [G(1), G(2)])
    assert status == "underdetermined"
    assert x is None


def test_complex_solve_round_trip():
    matrix = [[I, G(1)], [G(1), I]]
    rhs = [G(3, 1), G(1, 3)]
    status, x = solve(matrix, rhs)
    assert status == "unique"
    for row, b in zip(matrix, rhs):
        total = GaussRational(0)
        for a, xi in zip(row, x):
            total = total + a * xi
        assert total == b
