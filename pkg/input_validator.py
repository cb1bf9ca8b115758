"""
Input Document Validator
========================

Checks a raw input document against what each command needs before any
computation starts. Collects every problem instead of stopping at the first,
separating errors (the command cannot run) from warnings (it can, but the
document probably does not say what the author meant).
"""

import logging
from fractions import Fraction
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

KNOWN_KEYS = {'L', 'M', 'pairing', 'f', 'site', 'script', 'graph', 'complex'}

# Keys each command reads; "LM" means L plus M (or a special pairing)
COMMAND_REQUIREMENTS = {
    'check-mmatrix': ['M'],
    'membership': ['LM', 'f'],
    'fire': ['LM', 'f'],
    'stabilize': ['LM', 'f'],
    'classify': ['LM'],
    'superstables': ['LM'],
    'criticals': ['LM'],
    'energy': ['LM', 'f'],
    'coker': ['L'],
    'parallelepiped': ['L'],
    'from-graph': ['graph'],
    'from-complex': ['complex'],
    'check-duality': ['LM'],
}

# Keys a command reads when present
OPTIONAL_FIELDS = {
    'fire': ['site', 'script'],
    'superstables': ['f'],
    'criticals': ['f'],
    'from-graph': ['M', 'pairing'],
    'from-complex': ['M', 'pairing'],
}


class InputValidator:
    """Validates an input document for a given command"""

    def __init__(self):
        self.errors = []
        self.warnings = []

    def validate_document(self, data: Any, command: str) -> Dict[str, Any]:
        """Main validation method"""
        self.errors = []
        self.warnings = []

        if not isinstance(data, dict):
            self._add_error("STRUCTURE", "Input document must be a JSON object", "Root level")
            return self._generate_report()

        self._validate_keys(data, command)
        size_l = self._validate_matrix(data.get('L'), 'L', integer=True)
        size_m = self._validate_matrix(data.get('M'), 'M', integer=False)
        if size_l is not None and size_m is not None and size_l != size_m:
            self._add_error("DIMENSION", f"L is {size_l}x{size_l} but M is {size_m}x{size_m}", "L, M")

        size = size_l if size_l is not None else size_m
        self._validate_vector(data.get('f'), 'f', size)
        self._validate_vector(data.get('script'), 'script', size, nonnegative=True)
        self._validate_site(data.get('site'), size)
        if 'graph' in data:
            self._validate_graph(data['graph'])
        if 'complex' in data:
            self._validate_complex(data['complex'])

        return self._generate_report()

    def _validate_keys(self, data: Dict[str, Any], command: str):
        for key in data:
            if key not in KNOWN_KEYS:
                self._add_warning("STRUCTURE", f"Unknown key '{key}' is ignored", "Root level")

        requirements = COMMAND_REQUIREMENTS.get(command)
        if requirements is None:
            self._add_error("COMMAND", f"Unknown command '{command}'", "Command line")
            return

        for key in requirements:
            if key == 'LM':
                if 'L' not in data:
                    self._add_error("MISSING_FIELD", "Missing required matrix 'L'", command)
                if 'M' not in data and data.get('pairing', 'given') == 'given':
                    self._add_error("MISSING_FIELD",
                                    "Missing 'M' (or \"pairing\": \"classical\" / \"identity\")", command)
            elif key not in data:
                self._add_error("MISSING_FIELD", f"Missing required field '{key}'", command)

        if command == 'fire' and ('site' in data) == ('script' in data):
            self._add_error("MISSING_FIELD", "Give exactly one of 'site' or 'script'", command)

        used = {k for r in requirements for k in (('L', 'M', 'pairing') if r == 'LM' else (r,))}
        used.update(OPTIONAL_FIELDS.get(command, []))
        for key in sorted((KNOWN_KEYS & set(data)) - used):
            self._add_warning("UNUSED", f"Field '{key}' is not used by '{command}'", command)

    def _check_entry(self, value: Any, context: str, integer: bool) -> bool:
        if isinstance(value, bool):
            self._add_error("VALIDATION", f"Boolean entry {value}", context)
            return False
        if isinstance(value, int):
            return True
        if isinstance(value, float):
            if value.is_integer():
                self._add_warning("VALIDATION", f"Float entry {value} read as an integer", context)
                return True
            self._add_error("VALIDATION", f"Non-integral float {value}; write rationals as \"p/q\"", context)
            return False
        if isinstance(value, str):
            try:
                q = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                self._add_error("VALIDATION", f"Cannot parse '{value}' as a rational", context)
                return False
            if integer and q.denominator != 1:
                self._add_error("VALIDATION", f"Entry '{value}' must be an integer", context)
                return False
            return True
        self._add_error("VALIDATION", f"Unsupported entry {value!r}", context)
        return False

    def _validate_matrix(self, rows: Any, name: str, integer: bool) -> Optional[int]:
        """Returns the size of a valid square matrix, otherwise None"""
        if rows is None:
            return None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            self._add_error("STRUCTURE", f"'{name}' must be an array of rows", name)
            return None
        n = len(rows)
        if n == 0:
            self._add_error("STRUCTURE", f"'{name}' is empty", name)
            return None
        if any(len(r) != n for r in rows):
            self._add_error("DIMENSION", f"'{name}' is not square", name)
            return None

        ok = True
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                ok = self._check_entry(value, f"{name}[{i}][{j}]", integer) and ok
        return n if ok else None

    def _validate_vector(self, values: Any, name: str, size: Optional[int], nonnegative: bool = False):
        if values is None:
            return
        if not isinstance(values, list):
            self._add_error("STRUCTURE", f"'{name}' must be a flat array", name)
            return
        if size is not None and len(values) != size:
            self._add_error("DIMENSION", f"'{name}' has length {len(values)}, expected {size}", name)
        for i, value in enumerate(values):
            if self._check_entry(value, f"{name}[{i}]", integer=True) and nonnegative:
                if Fraction(str(value)) < 0:
                    self._add_error("VALIDATION", f"Negative entry {value}", f"{name}[{i}]")

    def _validate_site(self, site: Any, size: Optional[int]):
        if site is None:
            return
        if isinstance(site, bool) or not isinstance(site, int):
            self._add_error("VALIDATION", "'site' must be an integer", "site")
        elif size is not None and not 0 <= site < size:
            # IndexOutOfRange is a domain error, reported at dispatch
            self._add_warning("VALIDATION", f"Site {site} is outside [0, {size})", "site")

    def _validate_graph(self, graph: Any):
        if not isinstance(graph, dict):
            self._add_error("STRUCTURE", "'graph' must be an object", "graph")
            return
        for field in ('vertices', 'edges'):
            if field not in graph:
                self._add_error("MISSING_FIELD", f"Missing required field '{field}'", "graph")
        if 'sink' not in graph:
            self._add_warning("MISSING_FIELD", "No 'sink' given, vertex 0 is used", "graph")

        seen = set()
        for edge in graph.get('edges', []):
            if not isinstance(edge, list) or len(edge) not in (2, 3):
                self._add_error("STRUCTURE", f"Edge {edge} must be [u, v] or [u, v, mult]", "graph")
                continue
            key = tuple(edge[:2])
            if key in seen:
                self._add_warning("VALIDATION", f"Edge {list(key)} listed more than once; multiplicities add",
                                  "graph")
            seen.add(key)

    def _validate_complex(self, complex_doc: Any):
        if not isinstance(complex_doc, dict):
            self._add_error("STRUCTURE", "'complex' must be an object", "complex")
            return
        for field in ('facets', 'tree'):
            if field not in complex_doc:
                self._add_error("MISSING_FIELD", f"Missing required field '{field}'", "complex")
        for facet in complex_doc.get('facets', []):
            if not isinstance(facet, list) or len(facet) != 3:
                self._add_error("STRUCTURE", f"Facet {facet} must list three vertices", "complex")
            elif list(facet) != sorted(facet):
                self._add_warning("VALIDATION", f"Facet {facet} is reoriented to {sorted(facet)}", "complex")

    def _add_error(self, category: str, message: str, context: str):
        """Add error to list"""
        self.errors.append({
            'category': category,
            'severity': 'ERROR',
            'message': message,
            'context': context
        })

    def _add_warning(self, category: str, message: str, context: str):
        """Add warning to list"""
        self.warnings.append({
            'category': category,
            'severity': 'WARNING',
            'message': message,
            'context': context
        })

    def _generate_report(self) -> Dict[str, Any]:
        """Log every finding and return the validation report"""
        for error in self.errors:
            logger.error(f"[{error['category']}] {error['message']} ({error['context']})")
        for warning in self.warnings:
            logger.warning(f"[{warning['category']}] {warning['message']} ({warning['context']})")

        if self.errors:
            status = 'INVALID'
        elif self.warnings:
            status = 'VALID_WITH_WARNINGS'
        else:
            status = 'VALID'

        return {
            'status': status,
            'errors': self.errors,
            'warnings': self.warnings,
            'error_count': len(self.errors),
            'warning_count': len(self.warnings)
        }
