"""
Chip-Firing Command-Line Runner
===============================

Reads one JSON input document (file or stdin), runs a single command on it
and writes the resulting report to stdout as JSON or as text tables.

Exit codes: 0 success, 1 domain negative or invalid configuration, 2 parse or
schema error, 3 cap exceeded. A negative check-mmatrix verdict exits 1;
negative membership and check-duality answers are reported as data and exit 0.

from-graph and from-complex classify the constructed L when the document
gives M or "pairing", or when --classify-with is set; not both.

Example:
    python run_chipfiring.py classify --input running.json --format text
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from chipfiring_main import ChipFiringCalculator, build_pairing
from constructors import (
    Digraph,
    SimplicialComplex2D,
    fundamental_parallelepiped_points,
    identity_pairing,
    non_tree_edges,
    reduced_combinatorial_laplacian,
    reduced_graph_laplacian,
)
from dynamics import PolicyOrder
from errors import ChipFiringError, ParseError
from input_validator import COMMAND_REQUIREMENTS, InputValidator
from mmatrix import check_m_matrix
from models_config import EngineConfig, JobDocument, load_engine_config
from report_processor import ReportProcessor

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None):
    """Log to stderr (stdout carries the report) and optionally to a file"""
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level.upper()), format=LOG_FORMAT, handlers=handlers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_chipfiring",
        description="Exact chip-firing on an (L, M) pairing",
    )
    parser.add_argument("command", choices=list(COMMAND_REQUIREMENTS))
    parser.add_argument("--input", "-i", default="-", help="input JSON document, '-' for stdin")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--policy", choices=[o.value for o in PolicyOrder], help="firing order")
    parser.add_argument("--seed", type=int, help="seed for the random firing order")
    parser.add_argument("--cap-det", type=int, help="largest |det L| to enumerate")
    parser.add_argument("--cap-box", type=int, help="largest superstability search box")
    parser.add_argument("--cap-ball", type=int, help="largest brute-force energy ball")
    parser.add_argument("--max-firings", type=int, help="firing cap for stabilization")
    parser.add_argument("--workers", type=int, help="threads for per-class work")
    parser.add_argument("--check-invariants", action="store_true", help="assert invariants after every firing")
    parser.add_argument("--bruteforce", action="store_true", help="energy: also report the brute-force minimizer")
    parser.add_argument("--classify-with", choices=["classical", "identity"],
                        help="from-graph / from-complex: classify the constructed L (or give M / pairing in the document)")
    parser.add_argument("--excel", help="classify: also export class reports to this .xlsx file")
    parser.add_argument("--config", help="engine configuration JSON (default engine_config.json)")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file")
    return parser


class ChipFiringRunner:
    """Runs one command of the command-line interface"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = self.engine_config()
        self.processor = ReportProcessor()
        self.document: Optional[JobDocument] = None

    def engine_config(self) -> EngineConfig:
        """Configuration file values, overridden by command-line flags"""
        config = load_engine_config(self.args.config)
        overrides = {
            "det_cap": self.args.cap_det,
            "box_cap": self.args.cap_box,
            "ball_cap": self.args.cap_ball,
            "max_firings": self.args.max_firings,
            "workers": self.args.workers,
            "seed": self.args.seed,
        }
        update = {k: v for k, v in overrides.items() if v is not None}
        if self.args.policy:
            update["default_policy"] = PolicyOrder(self.args.policy)
        if self.args.check_invariants:
            update["check_invariants"] = True
        config = EngineConfig(**{**config.model_dump(), **update})
        if config.default_policy == PolicyOrder.RANDOM and config.seed is None:
            # fixed seed keeps output reproducible
            config = config.model_copy(update={"seed": 0})
        return config

    def load_document(self) -> JobDocument:
        """Read, validate and parse the input document"""
        if self.args.input == "-":
            text = sys.stdin.read()
        else:
            with open(self.args.input, 'r') as f:
                text = f.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON in input document: {e}")

        report = InputValidator().validate_document(data, self.args.command)
        if report['status'] == 'INVALID':
            first = report['errors'][0]
            raise ParseError(f"{report['error_count']} input error(s); first: {first['message']} ({first['context']})")
        return JobDocument.model_validate(data)

    def calculator(self) -> ChipFiringCalculator:
        calculator = ChipFiringCalculator.from_document(self.document, self.config)
        self.processor = calculator.report_processor
        return calculator

    def run(self) -> Tuple[Dict[str, Any], int]:
        self.document = self.load_document()
        handler = getattr(self, "cmd_" + self.args.command.replace("-", "_"))
        logger.info(f"Running {self.args.command}")
        result = handler()
        if isinstance(result, tuple):
            return result
        return result, 0

    # Commands

    def cmd_check_mmatrix(self):
        verdict = check_m_matrix(self.document.M)
        return self.processor.mmatrix_report(verdict), 0 if verdict.is_m_matrix else 1

    def cmd_membership(self):
        return self.calculator().membership(self.document.f)

    def cmd_fire(self):
        calculator = self.calculator()
        doc = self.document
        if doc.script is not None:
            result = calculator.multifire(doc.f, doc.script)
            return self.processor.fire_report(doc.f, result, script=doc.script)
        result = calculator.fire(doc.f, doc.site)
        return self.processor.fire_report(doc.f, result, site=doc.site)

    def cmd_stabilize(self):
        result = self.calculator().stabilize(self.document.f)
        return self.processor.stabilization_report(self.document.f, result)

    def cmd_classify(self):
        calculator = self.calculator()
        report = calculator.classify()
        if self.args.excel:
            calculator.export_class_reports_excel(self.args.excel)
        return report

    def cmd_superstables(self):
        calculator = self.calculator()
        f = self.document.f
        if f is not None:
            return self.processor.superstability_report(f, calculator.is_superstable(f))
        return calculator.superstables()

    def cmd_criticals(self):
        calculator = self.calculator()
        f = self.document.f
        if f is not None:
            return self.processor.critical_check_report(f, calculator.is_stable(f), calculator.is_critical(f))
        return calculator.criticals()

    def cmd_energy(self):
        calculator = self.calculator()
        f = self.document.f
        report = calculator.energy(f)
        if self.args.bruteforce:
            report["minimizer"] = list(calculator.energy_minimizer(f).f)
        return report

    def cmd_coker(self):
        # coker(L) does not depend on M
        return ChipFiringCalculator(identity_pairing(self.document.L), self.config).coker()

    def cmd_parallelepiped(self):
        points = fundamental_parallelepiped_points(self.document.L, cap=self.config.det_cap)
        return self.processor.parallelepiped_report(points)

    def cmd_check_duality(self):
        return self.processor.duality_report(self.calculator().duality())

    def cmd_from_graph(self):
        doc = self.document.graph
        if doc.undirected:
            graph = Digraph.undirected(doc.vertices, doc.edges, doc.sink)
        else:
            edges = [(e[0], e[1], e[2] if len(e) > 2 else 1) for e in doc.edges]
            graph = Digraph(vertex_count=doc.vertices, edges=edges, sink=doc.sink)
        L = reduced_graph_laplacian(graph)
        rows = [v for v in range(doc.vertices) if v != doc.sink]
        return self._constructed(L, rows)

    def cmd_from_complex(self):
        doc = self.document.complex
        complex_2d = SimplicialComplex2D(facets=doc.facets, sink_tree=doc.tree)
        L = reduced_combinatorial_laplacian(complex_2d)
        rows = [list(edge) for edge in non_tree_edges(complex_2d)]
        return self._constructed(L, rows)

    def _constructed(self, L: Any, rows: List[Any]) -> Dict[str, Any]:
        """The constructed L, classified when the document or --classify-with names an M"""
        report = self.processor.laplacian_report(L, rows)
        doc = self.document
        special = self.args.classify_with
        if doc.M is not None or doc.pairing != "given":
            if special:
                raise ParseError("Give the pairing either in the document (M / pairing) or with --classify-with")
            special = doc.pairing
        elif not special:
            return report
        pairing = build_pairing(L, doc.M, special)
        report.update(ChipFiringCalculator(pairing, self.config).classify())
        return report


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function; returns the exit code"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    runner = None
    try:
        runner = ChipFiringRunner(args)
        report, exit_code = runner.run()
    except ValidationError as e:
        return _fail(runner, "ParseError", f"Schema error: {e}", ParseError.exit_code)
    except ChipFiringError as e:
        return _fail(runner, type(e).__name__, str(e), e.exit_code)
    except (OSError, json.JSONDecodeError) as e:
        return _fail(runner, "ParseError", str(e), ParseError.exit_code)

    print(runner.processor.render(report, args.format))
    return exit_code


def _fail(runner: Optional[ChipFiringRunner], error: str, message: str, exit_code: int) -> int:
    logger.error(f"{error}: {message}")
    processor = runner.processor if runner else ReportProcessor()
    print(processor.to_json({"error": error, "message": message, "exit_code": exit_code}))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
