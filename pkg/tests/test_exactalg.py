import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import RUNNING_L, RUNNING_M
from errors import DimensionMismatch, NonSquare, ParseError, SingularMatrix
from exactalg import (
    denominator_lcm,
    det,
    freeze,
    identity,
    int_matrix,
    is_integral,
    rat_inverse,
    rat_matrix,
    smith_normal_form,
    solve,
    to_rational,
)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("value, expected", [
    (3, Fraction(3)),
    ("3/4", Fraction(3, 4)),
    (" -5/10 ", Fraction(-1, 2)),
    (2.0, Fraction(2)),
])
def test_to_rational_accepts_exact_values(value, expected):
    assert to_rational(value) == expected


@pytest.mark.parametrize("value", [0.5, True, "abc", "1/0", None])
def test_to_rational_rejects_inexact_or_malformed(value):
    with pytest.raises(ParseError):
        to_rational(value)


def test_int_matrix_rejects_fractional_entries():
    with pytest.raises(ParseError):
        int_matrix([[1, "1/2"], [0, 1]])


def test_ragged_rows_are_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        rat_matrix([[1, 2], [3]])


@pytest.mark.parametrize("A, expected", [
    (RUNNING_L, 4),
    ([[0, 1], [1, 0]], -1),
    ([[1, 2], [2, 4]], 0),
    ([[0, 0, 1], [0, 1, 0], [1, 0, 0]], -1),
    ([[7]], 7),
])
def test_det(A, expected):
    assert det(int_matrix(A)) == expected


def test_det_of_non_square_raises():
    with pytest.raises(NonSquare):
        det(int_matrix([[1, 2, 3], [4, 5, 6]]))


def test_rat_inverse_is_exact():
    inverse = rat_inverse(int_matrix(RUNNING_L))
    expected = rat_matrix([["3/4", "1/4", "-1/4"], ["1/4", "3/4", "1/4"], ["-1/4", "1/4", "3/4"]])
    assert (inverse == expected).all()
    assert all(isinstance(v, Fraction) for v in inverse.flat)


def test_rat_inverse_of_singular_raises():
    with pytest.raises(SingularMatrix):
        rat_inverse(int_matrix([[1, 2], [2, 4]]))


def test_solve():
    x = solve(int_matrix([[2, 1], [1, 3]]), [1, 2])
    assert list(x) == [Fraction(1, 5), Fraction(3, 5)]


def test_freeze_makes_read_only_copy():
    A = int_matrix([[1, 2], [3, 4]])
    frozen = freeze(A)
    A[0, 0] = 9
    assert frozen[0, 0] == 1
    with pytest.raises(ValueError):
        frozen[0, 0] = 5


def test_integrality_helpers():
    assert is_integral([1, Fraction(4, 2), -3])
    assert not is_integral([Fraction(1, 2)])
    assert denominator_lcm([Fraction(1, 4), Fraction(5, 6), 3]) == 12


@pytest.mark.parametrize("A, factors", [
    (RUNNING_L, (1, 1, 4)),
    ([[2, 0], [0, 3]], (1, 6)),
    ([[2, 4], [6, 8]], (2, 4)),
    ([[-3]], (3,)),
    ([[3, -1, -1], [-1, 3, -1], [-1, -1, 3]], (1, 4, 4)),
    (_identity(3), (1, 1, 1)),
])
def test_smith_normal_form(A, factors):
    A = int_matrix(A)
    snf = smith_normal_form(A)
    n = A.shape[0]

    assert snf.invariant_factors == factors
    assert (snf.U.dot(A).dot(snf.V) == snf.D).all()
    assert (snf.U.dot(snf.U_inv) == int_matrix(_identity(n))).all()
    assert abs(det(snf.U)) == 1
    assert abs(det(snf.V)) == 1
    # off-diagonal entries vanish
    assert all(snf.D[i, j] == 0 for i in range(n) for j in range(n) if i != j)


def test_smith_normal_form_of_singular_raises():
    with pytest.raises(SingularMatrix):
        smith_normal_form(int_matrix([[1, 2], [2, 4]]))


def test_smith_factors_divide_and_multiply_to_det():
    rng = np.random.default_rng(7)
    for _ in range(40):
        A = int_matrix(rng.integers(-4, 5, size=(3, 3)).tolist())
        d = det(A)
        if d == 0:
            continue
        factors = smith_normal_form(A).invariant_factors
        assert all(factors[i + 1] % factors[i] == 0 for i in range(2))
        assert factors[0] * factors[1] * factors[2] == abs(d)


def _cofactor_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * _cofactor_det([row[:j] + row[j + 1:] for row in rows[1:]])
        for j in range(len(rows))
    )


def test_det_matches_cofactor_expansion():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        assert det(int_matrix(rows)) == _cofactor_det(rows)


def test_rat_inverse_of_random_rational_matrices():
    rng = random.Random(12)
    checked = 0
    while checked < 100:
        n = rng.randint(1, 4)
        A = rat_matrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])
        try:
            inverse = rat_inverse(A)
        except SingularMatrix:
            continue
        assert (inverse.dot(A) == identity(n)).all()
        assert (A.dot(inverse) == identity(n)).all()
        checked += 1


@pytest.mark.parametrize("A, b, expected", [
    (RUNNING_M, [1, 1, 1], [1, 1, 1]),
    (RUNNING_L, [4, 0, 4], [2, 2, 2]),
])
def test_solve_running_matrices(A, b, expected):
    assert list(solve(int_matrix(A), b)) == expected
