from fractions import Fraction

import pytest

from conftest import RUNNING_L, RUNNING_M
from errors import NonSquare, NotAnMMatrix
from exactalg import rat_matrix
from mmatrix import (
    MMatrixFailure,
    check_m_matrix,
    integer_positive_witness,
    positive_vector_witness,
)


def test_running_m_is_m_matrix():
    verdict = check_m_matrix(RUNNING_M)
    assert verdict.is_m_matrix
    assert verdict.failure_reason is None
    assert list(verdict.inverse[0]) == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
    assert list(verdict.positive_witness) == [1, 1, 1]


def test_identity_is_m_matrix():
    assert check_m_matrix([[1, 0], [0, 1]]).is_m_matrix


def test_rational_entries_are_accepted():
    verdict = check_m_matrix([["3/2", "-1/2"], ["-1/2", "3/2"]])
    assert verdict.is_m_matrix
    assert list(verdict.positive_witness) == [1, 1]


@pytest.mark.parametrize("M, reason", [
    ([[1, -2], [-2, 1]], MMatrixFailure.NEGATIVE_INVERSE_ENTRY),
    (RUNNING_L, MMatrixFailure.BAD_SIGN_PATTERN),
    ([[0, 0], [0, 1]], MMatrixFailure.BAD_SIGN_PATTERN),
    ([[1, -1], [-1, 1]], MMatrixFailure.SINGULAR),
])
def test_rejections_name_the_failure(M, reason):
    verdict = check_m_matrix(M)
    assert not verdict.is_m_matrix
    assert verdict.failure_reason == reason
    assert verdict.detail


def test_non_square_raises():
    with pytest.raises(NonSquare):
        check_m_matrix([[1, 0, 0], [0, 1, 0]])


def test_positive_vector_witness():
    M = [[2, -1], [0, 3]]
    w = positive_vector_witness(M)
    assert list(w) == [Fraction(2, 3), Fraction(1, 3)]
    assert all(v >= 0 for v in w)


def test_integer_positive_witness_scales_to_integers():
    M = [[2, -1], [0, 3]]
    witness = integer_positive_witness(M)
    assert witness.kappa == 3
    assert list(witness.u) == [2, 1]
    assert list(rat_matrix(M).dot(witness.u)) == [witness.kappa] * 2


def test_witness_of_non_m_matrix_raises():
    with pytest.raises(NotAnMMatrix):
        positive_vector_witness([[1, -2], [-2, 1]])
