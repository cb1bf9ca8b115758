"""
Chip-Firing Calculator Main Module
==================================

ChipFiringCalculator binds one (L, M) pairing to an engine configuration and
coordinates the library modules: membership (pairing), firing and
stabilization (dynamics), class representatives (classify) and report
building (report_processor).
"""

import logging
from typing import Any, Dict, List, Optional

from classify import (
    ClassReport,
    DualityResult,
    all_class_reports,
    check_duality,
    coker_summary,
    coset_label,
    energy,
    energy_minimizer_bruteforce,
    is_critical,
)
from constructors import classical_pairing, identity_pairing
from dynamics import (
    FiringPolicy,
    StabilizationResult,
    SuperstabilityCertificate,
    fire,
    is_stable,
    is_superstable,
    multifire,
    stabilize,
)
from models_config import EngineConfig, JobDocument
from pairing import ConfigS, Pairing, SLike, in_s_plus, make_pairing, r_config
from report_processor import ReportProcessor

logger = logging.getLogger(__name__)


def build_pairing(L: Any, M: Optional[Any] = None, special: str = "given") -> Pairing:
    """(L, M), or (L, L) for "classical" and (L, I) for "identity" """
    if special == "classical":
        return classical_pairing(L)
    if special == "identity":
        return identity_pairing(L)
    return make_pairing(L, M)


class ChipFiringCalculator:
    """
    Chip-firing engine for a single pairing.

    Every cap and the firing policy come from the engine configuration, so
    callers only pass configurations.
    """

    def __init__(self, pairing: Pairing, config: Optional[EngineConfig] = None):
        """
        Initialize the calculator

        Args:
            pairing: the (L, M) pairing
            config: engine configuration; defaults when omitted
        """
        self.pairing = pairing
        self.config = config or EngineConfig()
        self.policy = FiringPolicy(order=self.config.default_policy, seed=self.config.seed)
        self.report_processor = ReportProcessor(pairing)
        self._reports: Optional[List[ClassReport]] = None

    @classmethod
    def from_matrices(cls, L: Any, M: Any, config: Optional[EngineConfig] = None) -> "ChipFiringCalculator":
        return cls(make_pairing(L, M), config)

    @classmethod
    def from_document(cls, document: JobDocument, config: Optional[EngineConfig] = None) -> "ChipFiringCalculator":
        """Build the pairing a document describes: explicit M, or the classical / identity special case"""
        return cls(build_pairing(document.L, document.M, document.pairing), config)

    def membership(self, f: SLike) -> Dict[str, Any]:
        p = self.pairing
        return self.report_processor.membership_report(
            f, r_config(p, f).x, in_s_plus(p, f), coset_label(p, f)
        )

    def fire(self, f: SLike, site: int) -> ConfigS:
        return fire(self.pairing, f, site)

    def multifire(self, f: SLike, script: List[int]) -> ConfigS:
        return multifire(self.pairing, f, script)

    def stabilize(self, f: SLike) -> StabilizationResult:
        return stabilize(
            self.pairing,
            f,
            policy=self.policy,
            max_firings=self.config.max_firings,
            check_invariants=self.config.check_invariants,
        )

    def is_stable(self, f: SLike) -> bool:
        return is_stable(self.pairing, f, check_invariants=self.config.check_invariants)

    def is_superstable(self, f: SLike) -> SuperstabilityCertificate:
        return is_superstable(self.pairing, f, box_cap=self.config.box_cap)

    def is_critical(self, f: SLike) -> bool:
        return is_critical(self.pairing, f, max_firings=self.config.max_firings)

    def energy(self, f: SLike) -> Dict[str, Any]:
        return self.report_processor.energy_report(f, energy(self.pairing, f), coset_label(self.pairing, f))

    def energy_minimizer(self, f: SLike) -> ConfigS:
        return energy_minimizer_bruteforce(self.pairing, f, ball_cap=self.config.ball_cap)

    def class_reports(self) -> List[ClassReport]:
        """Per-class reports, computed once and cached"""
        if self._reports is None:
            self._reports = all_class_reports(
                self.pairing,
                cap=self.config.det_cap,
                box_cap=self.config.box_cap,
                policy=self.policy,
                max_firings=self.config.max_firings,
                workers=self.config.workers,
            )
        return self._reports

    def classify(self) -> Dict[str, Any]:
        return self.report_processor.classify_report(self.class_reports())

    def criticals(self) -> Dict[str, Any]:
        return self.report_processor.config_set_report("criticals", [r.critical for r in self.class_reports()])

    def superstables(self) -> Dict[str, Any]:
        return self.report_processor.config_set_report("superstables", [r.superstable for r in self.class_reports()])

    def coker(self) -> Dict[str, Any]:
        return self.report_processor.coker_report(coker_summary(self.pairing))

    def duality(self) -> DualityResult:
        return check_duality(
            self.pairing,
            cap=self.config.det_cap,
            box_cap=self.config.box_cap,
            policy=self.policy,
            max_firings=self.config.max_firings,
            workers=self.config.workers,
        )

    def export_class_reports_excel(self, output_file: str):
        """
        Export class reports to Excel with 3 tabs:
        - criticals: one column per class label, one row per site
        - superstables: same layout
        - energies: energy of the critical and of the superstable per class
        """
        self.report_processor.export_class_reports_excel(self.class_reports(), output_file)
