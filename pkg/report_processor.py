"""
Report Processor Module
=======================

Turns library results into report documents and renders them.

Reports are plain dicts holding only JSON types: rationals become ints when
integral and "p/q" strings otherwise. JSON output is the machine-readable
form; text output presents configuration sets as column vectors (one column
per class label) through pandas, and class reports can be exported to a
multi-tab Excel workbook.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

from classify import ClassReport, CokerSummary, CosetLabel, DualityResult
from constructors import LatticePointSet
from dynamics import StabilizationResult, SuperstabilityCertificate
from mmatrix import MMatrixVerdict
from pairing import ConfigS, Pairing

logger = logging.getLogger(__name__)

MATRIX_KEYS = ('L', 'M', 'inverse')
COLUMN_SET_KEYS = ('criticals', 'superstables', 'points')


def format_rational(q: Any) -> Any:
    """int when integral, otherwise "p/q" """
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_vector(values: Iterable[Any]) -> List[Any]:
    return [format_rational(v) for v in values]


def format_matrix(rows: Iterable[Iterable[Any]]) -> List[List[Any]]:
    return [format_vector(row) for row in rows]


def _config_values(config: Any) -> List[Any]:
    return list(config.f) if isinstance(config, ConfigS) else format_vector(config)


class ReportProcessor:
    """Builds report documents for one pairing and renders them"""

    def __init__(self, pairing: Optional[Pairing] = None):
        self.pairing = pairing

    def _header(self) -> Dict[str, Any]:
        p = self.pairing
        if p is None:
            return {}
        return {"n": p.n, "det_L_abs": p.det_L_abs, "invariant_factors": list(p.smith.invariant_factors)}

    # Report builders

    @staticmethod
    def mmatrix_report(verdict: MMatrixVerdict) -> Dict[str, Any]:
        report = {
            "is_m_matrix": verdict.is_m_matrix,
            "failure_reason": verdict.failure_reason.value if verdict.failure_reason else None,
            "detail": verdict.detail,
        }
        if verdict.inverse is not None:
            report["inverse"] = format_matrix(verdict.inverse)
        if verdict.positive_witness is not None:
            report["positive_witness"] = format_vector(verdict.positive_witness)
        return report

    def membership_report(self, f: Any, x: Sequence[Any], in_s_plus: bool, label: CosetLabel) -> Dict[str, Any]:
        return {
            **self._header(),
            "f": _config_values(f),
            "x": format_vector(x),
            "in_s_plus": in_s_plus,
            "label": list(label.residues),
        }

    def fire_report(self, f: Any, result: ConfigS, site: Optional[int] = None,
                    script: Optional[Sequence[int]] = None) -> Dict[str, Any]:
        report = {"f": _config_values(f)}
        if site is not None:
            report["site"] = site
        if script is not None:
            report["script"] = list(script)
        report["result"] = list(result.f)
        return report

    def stabilization_report(self, f: Any, result: StabilizationResult) -> Dict[str, Any]:
        return {
            "f": _config_values(f),
            "stable_config": list(result.stable_config.f),
            "firing_script": list(result.total_firings.z),
            "steps": result.steps,
        }

    def classify_report(self, reports: List[ClassReport]) -> Dict[str, Any]:
        return {
            **self._header(),
            "classes": [
                {
                    "label": list(r.label.residues),
                    "critical": list(r.critical.f),
                    "superstable": list(r.superstable.f),
                    "energy_of_critical": format_rational(r.energy_of_critical),
                    "energy_of_superstable": format_rational(r.energy_of_superstable),
                }
                for r in reports
            ],
        }

    def config_set_report(self, name: str, configs: List[ConfigS]) -> Dict[str, Any]:
        """Configurations listed in class-label order"""
        return {**self._header(), name: [list(c.f) for c in configs]}

    def superstability_report(self, f: Any, certificate: SuperstabilityCertificate) -> Dict[str, Any]:
        script = certificate.violating_script
        return {
            "f": _config_values(f),
            "is_superstable": certificate.is_superstable,
            "search_box": list(certificate.box),
            "box_volume": certificate.box_volume,
            "violating_script": list(script.z) if script else None,
        }

    def critical_check_report(self, f: Any, stable: bool, critical: bool) -> Dict[str, Any]:
        return {"f": _config_values(f), "is_stable": stable, "is_critical": critical}

    def energy_report(self, f: Any, value: Fraction, label: CosetLabel) -> Dict[str, Any]:
        return {"f": _config_values(f), "energy": format_rational(value), "label": list(label.residues)}

    @staticmethod
    def coker_report(summary: CokerSummary) -> Dict[str, Any]:
        return {"invariant_factors": list(summary.invariant_factors), "order": summary.order}

    @staticmethod
    def parallelepiped_report(points: LatticePointSet) -> Dict[str, Any]:
        return {"count": len(points), "points": [list(p) for p in points.points]}

    @staticmethod
    def laplacian_report(L: Any, rows: Optional[List[Any]] = None) -> Dict[str, Any]:
        report = {"L": format_matrix(L)}
        if rows is not None:
            report["rows"] = rows
        return report

    @staticmethod
    def duality_report(result: DualityResult) -> Dict[str, Any]:
        return {
            "holds": result.holds,
            "dual_vector": list(result.dual_vector.f),
            "counterexample": list(result.counterexample.f) if result.counterexample else None,
            "dual_of_counterexample": (
                list(result.dual_of_counterexample.f) if result.dual_of_counterexample else None
            ),
        }

    # Rendering

    @staticmethod
    def to_json(report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2)

    @staticmethod
    def column_table(columns: List[List[Any]], labels: Optional[List[str]] = None) -> pd.DataFrame:
        """Configurations as column vectors, one row per site"""
        labels = labels or [str(i) for i in range(len(columns))]
        n = len(columns[0]) if columns else 0
        return pd.DataFrame(
            {label: column for label, column in zip(labels, columns)},
            index=[f"site {i}" for i in range(n)],
        )

    def to_text(self, report: Dict[str, Any]) -> str:
        lines = []
        for key, value in report.items():
            if key == "classes":
                lines.extend(self._classes_text(value))
            elif key in MATRIX_KEYS:
                lines.append(f"{key}:")
                lines.append(pd.DataFrame(value).to_string(header=False, index=False))
            elif key in COLUMN_SET_KEYS:
                lines.append(f"{key}:")
                lines.append(self.column_table(value).to_string() if value else "(none)")
            elif isinstance(value, list):
                lines.append(f"{key}: ({', '.join(str(v) for v in value)})")
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)

    def _classes_text(self, classes: List[Dict[str, Any]]) -> List[str]:
        labels = ["[" + ",".join(str(r) for r in c["label"]) + "]" for c in classes]
        energies = pd.DataFrame(
            {
                "energy_of_critical": [c["energy_of_critical"] for c in classes],
                "energy_of_superstable": [c["energy_of_superstable"] for c in classes],
            },
            index=labels,
        )
        return [
            "criticals:",
            self.column_table([c["critical"] for c in classes], labels).to_string(),
            "superstables:",
            self.column_table([c["superstable"] for c in classes], labels).to_string(),
            "energies:",
            energies.to_string(),
        ]

    def render(self, report: Dict[str, Any], output_format: str = "json") -> str:
        if output_format == "text":
            return self.to_text(report)
        return self.to_json(report)

    def export_class_reports_excel(self, reports: List[ClassReport], output_file: str):
        """
        Export class reports to Excel with 3 separate tabs:
        - criticals: critical configuration of each class as a column
        - superstables: superstable configuration of each class as a column
        - energies: energies of both representatives per class (rationals as "p/q")

        Args:
            reports: class reports in label order
            output_file: Output Excel file path
        """
        output_path = Path(output_file)
        output_path.parent.mkdir(parents=True, exist_ok=True)

        labels = [str(r.label) for r in reports]
        criticals_df = self.column_table([list(r.critical.f) for r in reports], labels)
        superstables_df = self.column_table([list(r.superstable.f) for r in reports], labels)
        energies_df = pd.DataFrame({
            'label': labels,
            'energy_of_critical': [str(format_rational(r.energy_of_critical)) for r in reports],
            'energy_of_superstable': [str(format_rational(r.energy_of_superstable)) for r in reports],
        })

        with pd.ExcelWriter(output_file, engine='openpyxl') as writer:
            criticals_df.to_excel(writer, sheet_name='criticals')
            superstables_df.to_excel(writer, sheet_name='superstables')
            energies_df.to_excel(writer, sheet_name='energies', index=False)

        logger.info(f"Class reports exported to: {output_file} ({len(reports)} classes)")
