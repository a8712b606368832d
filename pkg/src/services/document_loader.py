import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from pydantic import ValidationError

from ..balance import GlobalKDifferential, construct_global
from ..curvegraph import DisconnectedGraph, DualGraph, Edge, GraphStructureError, build_dual_graph
from ..diffcalc import KDifferential
from ..exactnum import parse_rational
from ..localsing import BranchParametrizationError, BranchSystem, Placement, catalog, custom
from ..models.document import CurveDocument, DifferentialEntry, SingularityEntry

logger = logging.getLogger(__name__)


class DocumentError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class MissingDifferential(DocumentError):
    pass


class UnknownEdge(DocumentError):
    pass


_decoder = json.JSONDecoder()


def _skip_space(text: str, index: int) -> int:
    while index < len(text) and text[index] in " \t\r\n":
        index += 1
    return index


def _locate(text: str, index: int, path) -> int:
    """Offset of the value at a pydantic error location; stops at the deepest container found."""
    index = _skip_space(text, index)
    if not path or index >= len(text) or text[index] not in "{[":
        return index
    start = index
    opening = text[index]
    index = _skip_space(text, index + 1)
    position = 0
    while index < len(text) and text[index] not in "}]":
        if opening == "{":
            key, index = _decoder.raw_decode(text, index)
            index = _skip_space(text, index) + 1
        else:
            key = position
        if key == path[0]:
            return _locate(text, index, path[1:])
        _, index = _decoder.raw_decode(text, _skip_space(text, index))
        index = _skip_space(text, index)
        if index < len(text) and text[index] == ",":
            index = _skip_space(text, index + 1)
        position += 1
    return start


def _line_column(text: str, offset: int):
    return text.count("\n", 0, offset) + 1, offset - text.rfind("\n", 0, offset)


class DocumentLoader:
    def parse_text(self, text: str) -> CurveDocument:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno)
        try:
            return CurveDocument.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            line, column = _line_column(text, _locate(text, 0, first["loc"]))
            raise DocumentError(f"Invalid curve document at {location}: {first['msg']}", line=line, column=column)

    def load_path(self, path: str) -> CurveDocument:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise DocumentError(f"Cannot read {path}: {e}")
        logger.info(f"Loaded curve document {path}")
        return self.parse_text(text)

    def digest(self, document: Optional[CurveDocument], **options) -> str:
        payload = {
            "document": document.model_dump(mode="json") if document is not None else None,
            "options": {k: v for k, v in sorted(options.items()) if v is not None},
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_graph(self, document: CurveDocument) -> DualGraph:
        if not document.components:
            raise DocumentError("Curve document has no components")
        positions = {}
        for component in document.components:
            for key, value in component.positions.items():
                positions[key] = value
        try:
            return build_dual_graph(
                [(c.id, c.genus) for c in document.components],
                [Edge(id=e.id, plus=e.plus, minus=e.minus, length=e.length) for e in document.edges],
                positions=positions,
                marked_points={c.id: c.marked_points for c in document.components if c.marked_points},
            )
        except (GraphStructureError, ValidationError) as e:
            raise DocumentError(f"Invalid dual graph: {e}")
        except DisconnectedGraph:
            raise
        except ValueError as e:
            raise DocumentError(f"Invalid coordinate in dual graph: {e}")

    def singularity(self, document: Optional[CurveDocument], name: str, truncation: Optional[int] = None) -> BranchSystem:
        """A document singularity by id, or a catalog entry by name."""
        entries = {s.id: s for s in document.singularities} if document is not None else {}
        if name in entries:
            return self.branch_system(entries[name], truncation)
        try:
            return catalog(name, truncation)
        except KeyError as e:
            raise DocumentError(str(e.args[0]))

    def branch_system(self, entry: SingularityEntry, truncation: Optional[int] = None) -> BranchSystem:
        truncation = truncation or entry.truncation
        try:
            if entry.catalog is not None:
                return catalog(entry.catalog, truncation)
            return custom([(b.x, b.y) for b in entry.branches], truncation, name=entry.id)
        except KeyError as e:
            raise DocumentError(str(e.args[0]))
        except (BranchParametrizationError, ValueError) as e:
            raise DocumentError(f"Singularity {entry.id}: {e}")

    def placements(self, document: CurveDocument, truncation: Optional[int] = None) -> List[Placement]:
        placed = []
        for entry in document.singularities:
            if entry.position is None:
                continue
            system = self.branch_system(entry, truncation)
            try:
                points = tuple(parse_rational(p) for p in entry.position)
            except ValueError as e:
                raise DocumentError(f"Singularity {entry.id}: {e}")
            placed.append(Placement(id=entry.id, system=system, points=points))
        if not placed:
            raise DocumentError("No singularity carries a 'position'")
        return placed

    def differential_entry(self, document: CurveDocument, k: Optional[int]) -> DifferentialEntry:
        for entry in document.differentials:
            if k is None or entry.k == k:
                return entry
        raise MissingDifferential(f"Document has no differential with k={k}")

    def parse_params(self, text: Optional[str]) -> Dict[str, str]:
        """'e12=1,e23=2/3' -> {'e12': '1', 'e23': '2/3'}."""
        params = {}
        if not text:
            return params
        for item in text.split(","):
            if "=" not in item:
                raise DocumentError(f"Parameter {item!r} is not of the form edge=value")
            key, value = item.split("=", 1)
            params[key.strip()] = value.strip()
        return params

    def edge_params(self, graph: DualGraph, params: Mapping[str, str]) -> Dict[str, object]:
        unknown = sorted(set(params) - set(graph.edge_ids))
        if unknown:
            raise UnknownEdge(f"Unknown edges in parameters: {unknown}")
        missing = sorted(set(graph.edge_ids) - set(params))
        if missing:
            raise DocumentError(f"Parameters must cover every edge; missing {missing}")
        try:
            return {edge_id: parse_rational(value) for edge_id, value in params.items()}
        except ValueError as e:
            raise DocumentError(str(e))

    def global_differential(self, document: CurveDocument, graph: DualGraph, k: Optional[int]) -> GlobalKDifferential:
        entry = self.differential_entry(document, k)
        if entry.edge_params is not None:
            return construct_global(graph, entry.k, self.edge_params(graph, entry.edge_params))
        pieces = {}
        for component in graph.components:
            if not component.rational_chart:
                continue
            text = entry.pieces.get(component.id)
            if text is None:
                raise MissingDifferential(f"No differential given on component {component.id}")
            try:
                pieces[component.id] = KDifferential.from_text(entry.k, text)
            except ValueError as e:
                raise DocumentError(f"Differential on {component.id}: {e}")
        unknown = sorted(set(entry.pieces) - set(graph.vertex_ids))
        if unknown:
            raise DocumentError(f"Differentials given on unknown components {unknown}")
        return GlobalKDifferential(k=entry.k, pieces=pieces)


document_loader = DocumentLoader()
