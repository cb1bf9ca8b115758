"""
Firing Dynamics
===============

Firing, multifiring, stabilization and the stability / superstability
predicates.

The engine works in R-coordinates: for f = N x in S+, site i is ready exactly
when x_i >= M_ii (the off-diagonal entries of M are <= 0, so x - M e_i can only
go negative at coordinate i) and firing it maps x to x - M e_i while f moves to
f - L e_i. Integrality of N x is preserved by every firing.
"""

import itertools
import logging
import math
import random
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from errors import (
    BoxTooLarge,
    CannotFire,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidConfiguration,
    IterationCapExceeded,
    NegativeScript,
)
from exactalg import denominator_lcm, int_vector, is_integral, is_nonnegative, rat_vector
from pairing import ConfigR, ConfigS, Pairing, RLike, SLike, as_r_vector, as_s_vector, in_r_plus, in_s_plus, to_r_coords

logger = logging.getLogger(__name__)

DEFAULT_MAX_FIRINGS = 10 ** 6
DEFAULT_BOX_CAP = 10 ** 7


class PolicyOrder(str, Enum):
    LOWEST_INDEX = "lowest"
    HIGHEST_INDEX = "highest"
    RANDOM = "random"


class FiringPolicy(BaseModel):
    """Which ready site fires next"""
    model_config = ConfigDict(frozen=True)

    order: PolicyOrder = PolicyOrder.LOWEST_INDEX
    seed: Optional[int] = None

    @classmethod
    def lowest_index(cls) -> "FiringPolicy":
        return cls(order=PolicyOrder.LOWEST_INDEX)

    @classmethod
    def highest_index(cls) -> "FiringPolicy":
        return cls(order=PolicyOrder.HIGHEST_INDEX)

    @classmethod
    def seeded(cls, seed: int) -> "FiringPolicy":
        return cls(order=PolicyOrder.RANDOM, seed=seed)


class FiringScript(BaseModel):
    """z_i = number of times site i fires"""
    model_config = ConfigDict(frozen=True)

    z: Tuple[int, ...]

    def as_array(self) -> np.ndarray:
        return int_vector(self.z)


class StabilizationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    stable_config: ConfigS
    total_firings: FiringScript
    steps: int


class SuperstabilityCertificate(BaseModel):
    """Outcome of the exhaustive search over 0 <= z <= floor(M^-1 x)"""
    model_config = ConfigDict(frozen=True)

    is_superstable: bool
    box: Tuple[int, ...]
    box_volume: int
    violating_script: Optional[FiringScript] = None

    def __bool__(self) -> bool:
        return self.is_superstable


def require_valid_config(p: Pairing, f: SLike) -> Tuple[np.ndarray, np.ndarray]:
    f = as_s_vector(p, f)
    x = to_r_coords(p, f)
    if not is_nonnegative(x):
        raise InvalidConfiguration(f"Configuration {tuple(f)} is not in S+ (N^-1 f = {[str(v) for v in x]})")
    return f, x


def _require_site(p: Pairing, i: int):
    if not 0 <= i < p.n:
        raise IndexOutOfRange(f"Site {i} is out of range [0, {p.n})")


def _as_script(p: Pairing, z: Any) -> np.ndarray:
    values = z.z if isinstance(z, FiringScript) else z
    z = int_vector(values)
    if len(z) != p.n:
        raise DimensionMismatch(f"Firing script has length {len(z)}, expected {p.n}")
    if not is_nonnegative(z):
        raise NegativeScript(f"Firing script {tuple(z)} has negative entries")
    return z


def positive_part(z: Sequence[int]) -> Tuple[int, ...]:
    """z+ : keep nonnegative entries, zero the rest"""
    return tuple(max(int(v), 0) for v in z)


def can_fire(p: Pairing, f: SLike, i: int, check_invariants: bool = False) -> bool:
    f, x = require_valid_config(p, f)
    _require_site(p, i)
    ready = x[i] >= p.M[i, i]
    if check_invariants:
        direct = in_s_plus(p, f - p.L[:, i])
        assert ready == direct, f"Threshold test disagrees with membership at site {i} for {tuple(f)}"
    return ready


def fire(p: Pairing, f: SLike, i: int) -> ConfigS:
    """f - L e_i; raises CannotFire naming the coordinate of x - M e_i that goes negative"""
    f, x = require_valid_config(p, f)
    _require_site(p, i)
    after = x - p.M[:, i]
    violated = next((k for k, v in enumerate(after) if v < 0), None)
    if violated is not None:
        raise CannotFire(
            f"Site {i} cannot fire from {tuple(f)}: coordinate {violated} of x - M e_i is {after[violated]}",
            coordinate=violated,
        )
    return ConfigS.of(f - p.L[:, i])


def fire_r(p: Pairing, x: RLike, i: int) -> ConfigR:
    """x - M e_i for x in R+"""
    x = as_r_vector(p, x)
    if not in_r_plus(p, x):
        raise InvalidConfiguration(f"Coordinates {[str(v) for v in x]} are not in R+")
    _require_site(p, i)
    if x[i] < p.M[i, i]:
        raise CannotFire(f"Site {i} cannot fire: x_{i} = {x[i]} < M_ii = {p.M[i, i]}", coordinate=i)
    return ConfigR.of(x - p.M[:, i])


def can_multifire(p: Pairing, f: SLike, z: Any) -> bool:
    """M z <= x, equivalently f - L z stays in S+"""
    _, x = require_valid_config(p, f)
    z = _as_script(p, z)
    return is_nonnegative(x - p.M.dot(z))


def multifire(p: Pairing, f: SLike, z: Any) -> ConfigS:
    f_vec, _ = require_valid_config(p, f)
    script = _as_script(p, z)
    if not can_multifire(p, f_vec, script):
        raise CannotFire(f"Script {tuple(script)} leaves S+ from {tuple(f_vec)}")
    return ConfigS.of(f_vec - p.L.dot(script))


def stabilize(
    p: Pairing,
    f: SLike,
    policy: Optional[FiringPolicy] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    check_invariants: bool = False,
) -> StabilizationResult:
    """
    Fire ready sites one at a time until none is ready.

    The stable configuration and the total firing script do not depend on the
    policy; the policy only exists so that independence can be exercised.

    Raises:
        InvalidConfiguration: f is not in S+
        IterationCapExceeded: more than max_firings firings were needed
    """
    policy = policy or FiringPolicy.lowest_index()
    f_vec, x_vec = require_valid_config(p, f)
    n = p.n

    # firing runs on K x and K M, K the common denominator
    Mk, x, k = scaled_multifire_system(p, x_vec)
    current = [int(v) for v in f_vec]
    fired = [0] * n
    thresholds = [Mk[i][i] for i in range(n)]
    m_cols = [[Mk[j][i] for j in range(n)] for i in range(n)]
    l_cols = [[int(v) for v in p.L[:, i]] for i in range(n)]
    rng = random.Random(policy.seed) if policy.order == PolicyOrder.RANDOM else None

    steps = 0
    while True:
        ready = [i for i in range(n) if x[i] >= thresholds[i]]
        if not ready:
            break
        if steps >= max_firings:
            raise IterationCapExceeded(
                f"Stabilization exceeded {max_firings} firings from {tuple(f_vec)}"
            )

        if policy.order == PolicyOrder.LOWEST_INDEX:
            i = ready[0]
        elif policy.order == PolicyOrder.HIGHEST_INDEX:
            i = ready[-1]
        else:
            i = rng.choice(ready)

        for j in range(n):
            x[j] -= m_cols[i][j]
            current[j] -= l_cols[i][j]
        fired[i] += 1
        steps += 1

        if check_invariants:
            s_view = p.N.dot(rat_vector(Fraction(v, k) for v in x))
            assert is_integral(s_view), f"N x left the integers after firing site {i}"
            assert list(s_view) == current, f"S-view diverged from N x after firing site {i}"
            assert is_nonnegative(x), f"Firing site {i} left R+"

    logger.debug(f"Stabilized {tuple(f_vec)} -> {tuple(current)} in {steps} firings ({policy.order.value})")
    return StabilizationResult(
        stable_config=ConfigS.of(current),
        total_firings=FiringScript(z=tuple(fired)),
        steps=steps,
    )


def is_stable(p: Pairing, f: SLike, check_invariants: bool = False) -> bool:
    f, x = require_valid_config(p, f)
    stable = all(x[i] < p.M[i, i] for i in range(p.n))
    if check_invariants:
        direct = not any(in_s_plus(p, f - p.L[:, i]) for i in range(p.n))
        assert stable == direct, f"Threshold stability disagrees with membership for {tuple(f)}"
    return stable


def is_stable_r(p: Pairing, x: RLike) -> bool:
    x = as_r_vector(p, x)
    if not in_r_plus(p, x):
        raise InvalidConfiguration(f"Coordinates {[str(v) for v in x]} are not in R+")
    return all(x[i] < p.M[i, i] for i in range(p.n))


def scaled_multifire_system(p: Pairing, x: np.ndarray) -> Tuple[List[List[int]], List[int], int]:
    """Integer (K M, K x, K) with the same solutions of M z <= x"""
    k = denominator_lcm(list(p.M.flat) + list(x))
    Mk = [[int(v * k) for v in row] for row in p.M]
    xk = [int(v * k) for v in x]
    return Mk, xk, k


def multifire_box(p: Pairing, x: np.ndarray) -> Tuple[int, ...]:
    """Upper bounds floor(M^-1 x); any valid script z satisfies z <= M^-1 x since M^-1 >= 0"""
    return tuple(math.floor(v) for v in p.M_inv.dot(x))


def is_superstable(p: Pairing, f: SLike, box_cap: int = DEFAULT_BOX_CAP) -> SuperstabilityCertificate:
    """
    Exhaustively search 0 <= z <= floor(M^-1 x), z != 0, for a script with M z <= x.

    Scripts are tried in lexicographic order, so the reported violating
    script is the lexicographically first one.

    Raises:
        InvalidConfiguration: f is not in S+
        BoxTooLarge: the search box holds more than box_cap points
    """
    _, x = require_valid_config(p, f)
    box = multifire_box(p, x)
    volume = math.prod(b + 1 for b in box)
    if volume > box_cap:
        raise BoxTooLarge(f"Superstability search box {box} has {volume} points (cap {box_cap})")

    Mk, xk, _ = scaled_multifire_system(p, x)
    n = p.n
    for z in itertools.product(*(range(b + 1) for b in box)):
        if not any(z):
            continue
        if all(sum(Mk[i][j] * z[j] for j in range(n)) <= xk[i] for i in range(n)):
            return SuperstabilityCertificate(
                is_superstable=False,
                box=box,
                box_volume=volume,
                violating_script=FiringScript(z=z),
            )
    return SuperstabilityCertificate(is_superstable=True, box=box, box_volume=volume)
