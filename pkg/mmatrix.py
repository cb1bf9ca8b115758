"""
M-Matrix Recognition
====================

Decides whether a candidate matrix is an M-matrix and produces the positive
witnesses used when building representatives.

Inverse nonnegativity is the decision procedure. The positive vector witness
is derived from the inverse; avalanche finiteness is exercised by the
dynamics property tests rather than decided here.
"""

import logging
from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from errors import NotAnMMatrix, SingularMatrix
from exactalg import denominator_lcm, freeze, is_nonnegative, rat_inverse, rat_matrix, require_square, to_int_vector

logger = logging.getLogger(__name__)


class MMatrixFailure(str, Enum):
    BAD_SIGN_PATTERN = "BadSignPattern"
    SINGULAR = "Singular"
    NEGATIVE_INVERSE_ENTRY = "NegativeInverseEntry"


class MMatrixVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    is_m_matrix: bool
    failure_reason: Optional[MMatrixFailure] = None
    detail: Optional[str] = None
    inverse: Optional[np.ndarray] = None
    positive_witness: Optional[np.ndarray] = None


class IntegerWitness(BaseModel):
    """u = kappa * M^-1 * 1, so that M u = kappa * 1"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    kappa: int


def _sign_pattern_violation(M: np.ndarray) -> Optional[str]:
    n = M.shape[0]
    for i in range(n):
        if M[i, i] <= 0:
            return f"diagonal entry ({i}, {i}) = {M[i, i]} is not positive"
        for j in range(n):
            if i != j and M[i, j] > 0:
                return f"off-diagonal entry ({i}, {j}) = {M[i, j]} is positive"
    return None


def check_m_matrix(M: Any) -> MMatrixVerdict:
    """
    Decide whether M is an M-matrix.

    Args:
        M: square matrix with rational entries

    Returns:
        MMatrixVerdict; when positive it carries M^-1 and w = M^-1 * 1
    """
    M = rat_matrix(M)
    n = require_square(M, "M")

    violation = _sign_pattern_violation(M)
    if violation:
        logger.debug(f"Rejecting M: {violation}")
        return MMatrixVerdict(
            is_m_matrix=False,
            failure_reason=MMatrixFailure.BAD_SIGN_PATTERN,
            detail=violation,
        )

    try:
        inverse = rat_inverse(M)
    except SingularMatrix:
        return MMatrixVerdict(
            is_m_matrix=False,
            failure_reason=MMatrixFailure.SINGULAR,
            detail="matrix is singular",
        )

    for i in range(n):
        for j in range(n):
            if inverse[i, j] < 0:
                return MMatrixVerdict(
                    is_m_matrix=False,
                    failure_reason=MMatrixFailure.NEGATIVE_INVERSE_ENTRY,
                    detail=f"inverse entry ({i}, {j}) = {inverse[i, j]} is negative",
                    inverse=freeze(inverse),
                )

    witness = inverse.dot(np.ones(n, dtype=object))
    return MMatrixVerdict(
        is_m_matrix=True,
        inverse=freeze(inverse),
        positive_witness=freeze(witness),
    )


def _require_m_matrix(M: Any) -> MMatrixVerdict:
    verdict = check_m_matrix(M)
    if not verdict.is_m_matrix:
        raise NotAnMMatrix(f"Not an M-matrix ({verdict.failure_reason.value}): {verdict.detail}")
    return verdict


def positive_vector_witness(M: Any) -> np.ndarray:
    """w >= 0 with M w = 1"""
    return _require_m_matrix(M).positive_witness


def integer_positive_witness(M: Any) -> IntegerWitness:
    """Nonnegative integer u with M u = kappa * 1, kappa the lcm of the denominators of M^-1 * 1"""
    w = _require_m_matrix(M).positive_witness
    kappa = denominator_lcm(w)
    u = to_int_vector([v * kappa for v in w])
    assert is_nonnegative(u)
    return IntegerWitness(u=freeze(u), kappa=kappa)
