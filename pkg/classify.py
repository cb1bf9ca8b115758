"""
Class Representatives
=====================

Coset labels of coker(L) and the distinguished representative of every class:
the critical configuration (stabilization of a configuration in which every
site can fire), the superstable configuration (energy descent from the
critical), and the brute-force energy minimizer used as an independent check.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from dynamics import (
    DEFAULT_BOX_CAP,
    DEFAULT_MAX_FIRINGS,
    FiringPolicy,
    is_stable,
    is_superstable,
    require_valid_config,
    scaled_multifire_system,
    stabilize,
)
from errors import BallTooLarge, DeterminantExceedsCap, DimensionMismatch, ParseError
from exactalg import denominator_lcm, int_vector
from pairing import ConfigS, Pairing, RLike, SLike, as_r_vector, as_s_vector, to_r_coords

logger = logging.getLogger(__name__)

DEFAULT_BALL_CAP = 10 ** 7
DEFAULT_DET_CAP = 10 ** 4


class CosetLabel(BaseModel):
    """Residues of U f modulo the invariant factors of L"""
    model_config = ConfigDict(frozen=True)

    residues: Tuple[int, ...]

    def __str__(self) -> str:
        return "[" + ",".join(str(r) for r in self.residues) + "]"


class ClassReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: CosetLabel
    critical: ConfigS
    superstable: ConfigS
    energy_of_superstable: Fraction
    energy_of_critical: Fraction


class DualityResult(BaseModel):
    """Whether {D - c : c critical} equals the superstables, D_i = L_ii - 1"""
    model_config = ConfigDict(frozen=True)

    holds: bool
    dual_vector: ConfigS
    counterexample: Optional[ConfigS] = None
    dual_of_counterexample: Optional[ConfigS] = None


class CokerSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    invariant_factors: Tuple[int, ...]
    order: int


def coker_summary(p: Pairing) -> CokerSummary:
    return CokerSummary(invariant_factors=p.smith.invariant_factors, order=p.det_L_abs)


def coset_label(p: Pairing, f: SLike) -> CosetLabel:
    f = as_s_vector(p, f)
    uf = p.smith.U.dot(f)
    return CosetLabel(residues=tuple(int(v) % d for v, d in zip(uf, p.smith.invariant_factors)))


def all_labels(p: Pairing) -> List[CosetLabel]:
    """Every label of coker(L) in lexicographic order"""
    ranges = [range(d) for d in p.smith.invariant_factors]
    return [CosetLabel(residues=r) for r in itertools.product(*ranges)]


def _require_label(p: Pairing, label: CosetLabel) -> Tuple[int, ...]:
    residues = label.residues
    if len(residues) != p.n:
        raise DimensionMismatch(f"Label has {len(residues)} residues, expected {p.n}")
    for r, d in zip(residues, p.smith.invariant_factors):
        if not 0 <= r < d:
            raise ParseError(f"Residue {r} is outside [0, {d})")
    return residues


def label_representative(p: Pairing, label: CosetLabel) -> np.ndarray:
    """Some integer vector r with coset_label(r) = label, namely U^-1 * residues"""
    residues = _require_label(p, label)
    return p.smith.U_inv.dot(int_vector(residues))


def find_valid_representative(p: Pairing, label: CosetLabel, extra_translations: int = 0) -> ConfigS:
    """
    A member f of the class with x = N^-1 f >= diag(M), so every site can fire.

    Starting from r = U^-1 * residues reduced into the fundamental
    parallelepiped of L, translate by m copies of L u where M u = kappa * 1;
    this moves x by m * kappa * 1. m is the least value that clears every
    threshold, plus extra_translations.
    """
    r = label_representative(p, label)
    r = r - p.L.dot(int_vector(math.floor(v) for v in p.L_inv.dot(r)))
    x0 = to_r_coords(p, r)
    u, kappa = p.witness.u, p.witness.kappa
    m = max([0] + [math.ceil((p.M[i, i] - x0[i]) / kappa) for i in range(p.n)])
    m += extra_translations
    f = r + m * p.L.dot(u)
    return ConfigS.of(f)


def critical_config(
    p: Pairing,
    label: CosetLabel,
    policy: Optional[FiringPolicy] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    extra_translations: int = 0,
) -> ConfigS:
    """The unique critical configuration of the class"""
    start = find_valid_representative(p, label, extra_translations=extra_translations)
    return stabilize(p, start, policy=policy, max_firings=max_firings).stable_config


def is_critical(p: Pairing, f: SLike, max_firings: int = DEFAULT_MAX_FIRINGS) -> bool:
    """Stable and equal to the critical of its class; reachability is never searched"""
    f = ConfigS.of(as_s_vector(p, f))
    if not is_stable(p, f):
        return False
    return critical_config(p, coset_label(p, f), max_firings=max_firings) == f


def energy(p: Pairing, f: SLike) -> Fraction:
    """||L^-1 f||^2, equal to ||M^-1 x||^2 for x = N^-1 f"""
    c = p.L_inv.dot(as_s_vector(p, f))
    return sum((v * v for v in c), Fraction(0))


def r_energy(p: Pairing, x: RLike) -> Fraction:
    """||M^-1 x||^2"""
    c = p.M_inv.dot(as_r_vector(p, x))
    return sum((v * v for v in c), Fraction(0))


def energy_identity_holds(p: Pairing, x: RLike, z: Sequence[int]) -> bool:
    """Both forms of E(x - M z) = E(x) + z.z - 2 z.M^-1 x = E(x) - z.z - 2 z.M^-1 y"""
    x = as_r_vector(p, x)
    z = int_vector(z)
    y = x - p.M.dot(z)
    zz = sum(int(v) * int(v) for v in z)
    first = r_energy(p, x) + zz - 2 * z.dot(p.M_inv.dot(x))
    second = r_energy(p, x) - zz - 2 * z.dot(p.M_inv.dot(y))
    e_y = r_energy(p, y)
    return e_y == first and e_y == second


def descend_to_superstable(p: Pairing, f: SLike, box_cap: int = DEFAULT_BOX_CAP) -> ConfigS:
    """
    Apply violating multifiring scripts until none exists.

    Each script z lowers the energy by at least z.z >= 1, so the descent ends,
    and it ends at the unique energy minimizer of the class.
    """
    current = as_s_vector(p, f)
    steps = 0
    while True:
        certificate = is_superstable(p, current, box_cap=box_cap)
        if certificate.is_superstable:
            break
        z = certificate.violating_script.as_array()
        current = current - p.L.dot(z)
        steps += 1
    logger.debug(f"Energy descent reached {tuple(current)} after {steps} multifirings")
    return ConfigS.of(current)


def superstable_config(
    p: Pairing,
    label: CosetLabel,
    box_cap: int = DEFAULT_BOX_CAP,
    policy: Optional[FiringPolicy] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
) -> ConfigS:
    """The unique superstable (energy-minimizing) configuration of the class"""
    critical = critical_config(p, label, policy=policy, max_firings=max_firings)
    return descend_to_superstable(p, critical, box_cap=box_cap)


def energy_minimizer_bruteforce(p: Pairing, f: SLike, ball_cap: int = DEFAULT_BALL_CAP) -> ConfigS:
    """
    Minimum-energy member of the class of f within S+, by enumeration.

    Members g = f - L z with energy <= E(f) satisfy ||L^-1 f - z||^2 <= E(f), so
    z lies in a ball around c = L^-1 f. Everything is scaled by the common
    denominator of c and checked in integers.

    Raises:
        InvalidConfiguration: f is not in S+
        BallTooLarge: the bounding box of the ball exceeds ball_cap points
    """
    f, x = require_valid_config(p, f)
    c = p.L_inv.dot(f)
    d = denominator_lcm(c)
    C = [int(v * d) for v in c]
    radius_sq = sum(v * v for v in C)
    s = math.isqrt(radius_sq)

    bounds = [(-((s - ci) // d), (ci + s) // d) for ci in C]
    volume = math.prod(hi - lo + 1 for lo, hi in bounds)
    if volume > ball_cap:
        raise BallTooLarge(f"Energy ball around {tuple(f)} spans {volume} lattice points (cap {ball_cap})")

    Mk, xk, _ = scaled_multifire_system(p, x)
    n = p.n
    best = None
    for z in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        dist = sum((C[i] - d * z[i]) ** 2 for i in range(n))
        if dist > radius_sq:
            continue
        if not all(sum(Mk[i][j] * z[j] for j in range(n)) <= xk[i] for i in range(n)):
            continue
        if best is None or dist < best[0]:
            best = (dist, z)

    # z = 0 is always a candidate, so best is set
    z = int_vector(best[1])
    return ConfigS.of(f - p.L.dot(z))


def _class_report(p: Pairing, label: CosetLabel, box_cap: int, policy: Optional[FiringPolicy],
                  max_firings: int) -> ClassReport:
    critical = critical_config(p, label, policy=policy, max_firings=max_firings)
    superstable = descend_to_superstable(p, critical, box_cap=box_cap)
    return ClassReport(
        label=label,
        critical=critical,
        superstable=superstable,
        energy_of_superstable=energy(p, superstable),
        energy_of_critical=energy(p, critical),
    )


def all_class_reports(
    p: Pairing,
    cap: int = DEFAULT_DET_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
    policy: Optional[FiringPolicy] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    workers: int = 1,
) -> List[ClassReport]:
    """
    One report per element of coker(L), in lexicographic label order.

    Raises:
        DeterminantExceedsCap: |det L| > cap
    """
    if p.det_L_abs > cap:
        raise DeterminantExceedsCap(f"|det L| = {p.det_L_abs} exceeds cap {cap}")

    labels = all_labels(p)

    def report(label: CosetLabel) -> ClassReport:
        return _class_report(p, label, box_cap, policy, max_firings)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(report, labels))
    else:
        reports = [report(label) for label in labels]

    logger.info(f"Classified {len(reports)} classes of coker(L)")
    return reports


def check_duality(
    p: Pairing,
    cap: int = DEFAULT_DET_CAP,
    box_cap: int = DEFAULT_BOX_CAP,
    policy: Optional[FiringPolicy] = None,
    max_firings: int = DEFAULT_MAX_FIRINGS,
    workers: int = 1,
) -> DualityResult:
    """
    Compare {D - c : c critical} with the superstables, where D_i = L_ii - 1.

    Holds for classical graph pairings; the counterexample is the first
    critical (in label order) whose dual is not superstable.
    """
    reports = all_class_reports(
        p, cap=cap, box_cap=box_cap, policy=policy, max_firings=max_firings, workers=workers
    )
    dual = int_vector(int(p.L[i, i]) - 1 for i in range(p.n))
    superstables = {r.superstable for r in reports}

    for r in reports:
        candidate = ConfigS.of(dual - r.critical.as_array())
        if candidate not in superstables:
            return DualityResult(
                holds=False,
                dual_vector=ConfigS.of(dual),
                counterexample=r.critical,
                dual_of_counterexample=candidate,
            )
    return DualityResult(holds=True, dual_vector=ConfigS.of(dual))
