"""
Pairing Construction & Membership
=================================

The (L, M) pairing: L is an invertible integer matrix giving the firing
dynamics and M is an M-matrix selecting the valid cone through N = L M^-1.

    S+ = {N x : N x integer, x >= 0}      (configurations f)
    R+ = {x   : N x integer, x >= 0}      (coordinates x, f = N x)
"""

import logging
from fractions import Fraction
from typing import Any, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from errors import DimensionMismatch, NotAnMMatrix, SingularL
from exactalg import (
    SmithDecomposition,
    det,
    freeze,
    int_matrix,
    int_vector,
    is_integral,
    is_nonnegative,
    rat_inverse,
    rat_matrix,
    rat_vector,
    require_square,
    smith_normal_form,
    to_integer,
)
from mmatrix import IntegerWitness, check_m_matrix, integer_positive_witness

logger = logging.getLogger(__name__)


class ConfigS(BaseModel):
    """Integer configuration f (entries may be negative)"""
    model_config = ConfigDict(frozen=True)

    f: Tuple[int, ...]

    @classmethod
    def of(cls, values: Sequence[Any]) -> "ConfigS":
        return cls(f=tuple(to_integer(v) for v in values))

    def as_array(self) -> np.ndarray:
        return int_vector(self.f)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.f) + ")"


class ConfigR(BaseModel):
    """Rational coordinate vector x with f = N x"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Sequence[Any]) -> "ConfigR":
        return cls(x=tuple(rat_vector(values)))

    def as_array(self) -> np.ndarray:
        return rat_vector(self.x)


SLike = Union[ConfigS, Sequence[Any], np.ndarray]
RLike = Union[ConfigR, Sequence[Any], np.ndarray]


class Pairing(BaseModel):
    """Immutable (L, M) context with the exact matrices every query needs"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    L: np.ndarray
    M: np.ndarray
    L_inv: np.ndarray
    M_inv: np.ndarray
    N: np.ndarray
    N_inv: np.ndarray
    n: int
    det_L_abs: int
    smith: SmithDecomposition
    witness: IntegerWitness


def make_pairing(L: Any, M: Any) -> Pairing:
    """
    Build the pairing (L, M).

    Raises:
        DimensionMismatch: L and M differ in size
        SingularL: det L = 0
        NotAnMMatrix: M fails the M-matrix check
    """
    L = int_matrix(L)
    M = rat_matrix(M)
    n = require_square(L, "L")
    if require_square(M, "M") != n:
        raise DimensionMismatch(f"L is {n}x{n} but M is {M.shape[0]}x{M.shape[1]}")

    det_L = det(L)
    if det_L == 0:
        raise SingularL("L must be invertible")

    verdict = check_m_matrix(M)
    if not verdict.is_m_matrix:
        raise NotAnMMatrix(f"M is not an M-matrix ({verdict.failure_reason.value}): {verdict.detail}")

    L_inv = rat_inverse(L)
    M_inv = verdict.inverse
    pairing = Pairing(
        L=freeze(L),
        M=freeze(M),
        L_inv=freeze(L_inv),
        M_inv=M_inv,
        N=freeze(L.dot(M_inv)),
        N_inv=freeze(M.dot(L_inv)),
        n=n,
        det_L_abs=abs(det_L),
        smith=smith_normal_form(L),
        witness=integer_positive_witness(M),
    )
    logger.info(f"Pairing built: n={n}, |det L|={pairing.det_L_abs}, invariant factors={pairing.smith.invariant_factors}")
    return pairing


def as_s_vector(p: Pairing, f: SLike) -> np.ndarray:
    """Integer vector of length n from a ConfigS or a plain sequence"""
    values = f.f if isinstance(f, ConfigS) else f
    vector = int_vector(values)
    if len(vector) != p.n:
        raise DimensionMismatch(f"Configuration has length {len(vector)}, expected {p.n}")
    return vector


def as_r_vector(p: Pairing, x: RLike) -> np.ndarray:
    values = x.x if isinstance(x, ConfigR) else x
    vector = rat_vector(values)
    if len(vector) != p.n:
        raise DimensionMismatch(f"Coordinate vector has length {len(vector)}, expected {p.n}")
    return vector


def to_r_coords(p: Pairing, f: SLike) -> np.ndarray:
    """x = N^-1 f"""
    return p.N_inv.dot(as_s_vector(p, f))


def to_s_coords(p: Pairing, x: RLike) -> np.ndarray:
    """N x (rational in general; integral exactly on R+ lifts)"""
    return p.N.dot(as_r_vector(p, x))


def r_config(p: Pairing, f: SLike) -> ConfigR:
    return ConfigR.of(to_r_coords(p, f))


def s_config(p: Pairing, x: RLike) -> ConfigS:
    """N x as a configuration; raises ParseError when N x is not integral"""
    return ConfigS.of(to_s_coords(p, x))


def in_s_plus(p: Pairing, f: SLike) -> bool:
    return is_nonnegative(to_r_coords(p, f))


def in_r_plus(p: Pairing, x: RLike) -> bool:
    x = as_r_vector(p, x)
    return is_nonnegative(x) and is_integral(p.N.dot(x))


def same_class(p: Pairing, f: SLike, g: SLike) -> bool:
    """f ~_L g, i.e. L^-1 (g - f) is integral"""
    return is_integral(p.L_inv.dot(as_s_vector(p, g) - as_s_vector(p, f)))


def equivalent_r(p: Pairing, x: RLike, y: RLike) -> bool:
    """x ~_M y, i.e. M^-1 (y - x) is integral"""
    return is_integral(p.M_inv.dot(as_r_vector(p, y) - as_r_vector(p, x)))


def diagonal_rescale(p: Pairing, d: Sequence[Any]) -> Pairing:
    """The pairing (L, D M) for the positive diagonal D = diag(d)"""
    d = rat_vector(d)
    if len(d) != p.n:
        raise DimensionMismatch(f"Diagonal has length {len(d)}, expected {p.n}")
    return make_pairing(p.L, p.M * d.reshape(p.n, 1))
