"""
Exact Linear Algebra
====================

Exact rational and integer linear algebra shared by every other module.

Matrices and vectors are numpy arrays of dtype ``object`` holding Python
``int`` (integer matrices) or ``fractions.Fraction`` (rational matrices), so
every operation is exact and no floating point value is ever produced.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from errors import DimensionMismatch, NonSquare, ParseError, SingularMatrix

logger = logging.getLogger(__name__)

Rational = Fraction


def to_rational(value: Any) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction"""
    if isinstance(value, bool):
        raise ParseError(f"Boolean is not a valid matrix entry: {value}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise ParseError(f"Non-integral float {value} is not exact; write it as a \"p/q\" string")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Cannot parse rational from '{value}': {e}")
    raise ParseError(f"Unsupported entry type {type(value).__name__}: {value!r}")


def to_integer(value: Any) -> int:
    q = to_rational(value)
    if q.denominator != 1:
        raise ParseError(f"Expected an integer entry, got {q}")
    return q.numerator


def _as_2d(data: List[List[Any]]) -> np.ndarray:
    if len(data) == 0:
        return np.empty((0, 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise DimensionMismatch("Matrix rows have unequal lengths")
    arr = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        for j, value in enumerate(row):
            arr[i, j] = value
    return arr


def int_matrix(rows: Iterable[Iterable[Any]]) -> np.ndarray:
    return _as_2d([[to_integer(v) for v in row] for row in rows])


def rat_matrix(rows: Iterable[Iterable[Any]]) -> np.ndarray:
    return _as_2d([[to_rational(v) for v in row] for row in rows])


def int_vector(values: Iterable[Any]) -> np.ndarray:
    data = [to_integer(v) for v in values]
    arr = np.empty(len(data), dtype=object)
    arr[:] = data
    return arr


def rat_vector(values: Iterable[Any]) -> np.ndarray:
    data = [to_rational(v) for v in values]
    arr = np.empty(len(data), dtype=object)
    arr[:] = data
    return arr


def identity(n: int, rational: bool = True) -> np.ndarray:
    one, zero = (Fraction(1), Fraction(0)) if rational else (1, 0)
    return _as_2d([[one if i == j else zero for j in range(n)] for i in range(n)])


def freeze(arr: np.ndarray) -> np.ndarray:
    """Return a read-only copy"""
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def require_square(A: np.ndarray, name: str = "matrix") -> int:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {A.shape}")
    return A.shape[0]


def is_integral(values: Iterable[Any]) -> bool:
    # ints expose .denominator == 1 as well
    return all(v.denominator == 1 for v in values)


def to_int_vector(values: Sequence[Any]) -> np.ndarray:
    if not is_integral(values):
        raise ValueError(f"Vector is not integral: {list(values)}")
    return int_vector(int(v) for v in values)


def denominator_lcm(values: Iterable[Any]) -> int:
    result = 1
    for v in values:
        result = lcm(result, v.denominator)
    return result


def is_nonnegative(values: Iterable[Any]) -> bool:
    return all(v >= 0 for v in values)


def det(A: np.ndarray) -> int:
    """Exact determinant of an integer matrix via Bareiss fraction-free elimination"""
    n = require_square(A)
    if n == 0:
        return 1
    m = [[to_integer(v) for v in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _gauss_jordan(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Reduce [A | B] to [I | A^-1 B] over the rationals"""
    n = require_square(A)
    A = rat_matrix(A)
    B = rat_matrix(B)
    if B.shape[0] != n:
        raise DimensionMismatch(f"Right-hand side has {B.shape[0]} rows, expected {n}")

    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r, col] != 0), None)
        if pivot is None:
            raise SingularMatrix("Matrix is singular")
        if pivot != col:
            A[[col, pivot]] = A[[pivot, col]]
            B[[col, pivot]] = B[[pivot, col]]

        inv = 1 / A[col, col]
        A[col, :] = A[col, :] * inv
        B[col, :] = B[col, :] * inv

        for r in range(n):
            if r != col and A[r, col] != 0:
                factor = A[r, col]
                A[r, :] = A[r, :] - factor * A[col, :]
                B[r, :] = B[r, :] - factor * B[col, :]
    return B


def rat_inverse(A: np.ndarray) -> np.ndarray:
    """Exact inverse of a square rational matrix; raises SingularMatrix"""
    n = require_square(A)
    return _gauss_jordan(A, identity(n))


def solve(A: np.ndarray, b: Sequence[Any]) -> np.ndarray:
    """Exact solution of A x = b for square nonsingular A"""
    n = require_square(A)
    b = rat_vector(b)
    if len(b) != n:
        raise DimensionMismatch(f"Right-hand side has length {len(b)}, expected {n}")
    return _gauss_jordan(A, b.reshape(n, 1))[:, 0]


class SmithDecomposition(BaseModel):
    """U·A·V = D with U, V unimodular and d1 | d2 | ... | dn"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray

    @property
    def invariant_factors(self) -> Tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(self.D.shape[0]))


def smith_normal_form(A: np.ndarray) -> SmithDecomposition:
    """
    Smith normal form of a square invertible integer matrix.

    Pivots on the smallest nonzero |entry| of the trailing block, clears its
    row and column by gcd reduction and repairs divisibility before moving on.
    U^-1 is tracked alongside U so coset labels can be lifted back to vectors.
    """
    n = require_square(A)
    if det(A) == 0:
        raise SingularMatrix("Smith normal form requires an invertible matrix")

    a = [[to_integer(v) for v in row] for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    U_inv = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for row in U_inv:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(target, source, q):
        # row_target += q * row_source
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        U[target] = [x + q * y for x, y in zip(U[target], U[source])]
        for row in U_inv:
            row[source] -= q * row[target]

    def add_col(target, source, q):
        # col_target += q * col_source
        for row in a:
            row[target] += q * row[source]
        for row in V:
            row[target] += q * row[source]

    for t in range(n):
        while True:
            _, pi, pj = min(
                (abs(a[i][j]), i, j)
                for i in range(t, n) for j in range(t, n) if a[i][j] != 0
            )
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]

            dirty = False
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
                if a[i][t] != 0:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
                if a[t][j] != 0:
                    dirty = True
            if dirty:
                continue

            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p != 0),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for row in U_inv:
                row[t] = -row[t]

    decomposition = SmithDecomposition(
        U=freeze(int_matrix(U)),
        D=freeze(int_matrix(a)),
        V=freeze(int_matrix(V)),
        U_inv=freeze(int_matrix(U_inv)),
    )
    logger.debug(f"Smith invariant factors: {decomposition.invariant_factors}")
    return decomposition
