import json
from fractions import Fraction

import pytest

from src.models.document import CurveDocument
from src.services.document_loader import DocumentError, DocumentLoader, MissingDifferential, UnknownEdge


class TestDocumentLoader:
    @pytest.fixture
    def loader(self):
        return DocumentLoader()

    def test_parse_text(self, loader, triangle_document):
        document = loader.parse_text(json.dumps(triangle_document))
        assert [c.id for c in document.components] == ["C1", "C2", "C3"]
        assert document.differentials[0].pieces["C1"] == "1/z - 1/(z-1)"

    def test_invalid_json_reports_position(self, loader):
        with pytest.raises(DocumentError) as exc_info:
            loader.parse_text('{\n  "components": [\n}')
        assert exc_info.value.line == 3
        assert "line 3" in str(exc_info.value)

    def test_unknown_top_level_field(self, loader):
        with pytest.raises(DocumentError) as exc_info:
            loader.parse_text('{"components": [], "curves": []}')
        assert "curves" in str(exc_info.value)
        assert (exc_info.value.line, exc_info.value.column) == (1, 30)

    def test_schema_error_points_at_nested_value(self, loader):
        text = '{\n  "components": [\n    {"id": "C1"},\n    {"id": "C2", "genus": -1}\n  ]\n}'
        with pytest.raises(DocumentError) as exc_info:
            loader.parse_text(text)
        assert "components.1.genus" in str(exc_info.value)
        assert (exc_info.value.line, exc_info.value.column) == (4, 27)

    def test_missing_field_points_at_its_object(self, loader):
        text = '{"edges": [\n  {"id": "e1", "plus": "A"}\n]}'
        with pytest.raises(DocumentError) as exc_info:
            loader.parse_text(text)
        assert (exc_info.value.line, exc_info.value.column) == (2, 3)

    def test_singularity_needs_one_source(self, loader):
        text = json.dumps({"singularities": [{"id": "s", "catalog": "cusp", "branches": [{"x": "t^2", "y": "t^3"}]}]})
        with pytest.raises(DocumentError) as exc_info:
            loader.parse_text(text)
        assert (exc_info.value.line, exc_info.value.column) == (1, 20)

    def test_load_path(self, loader, write_document, pair_document):
        document = loader.load_path(write_document(pair_document))
        assert document.differentials[0].k == 3

    def test_load_missing_path(self, loader, tmp_path):
        with pytest.raises(DocumentError):
            loader.load_path(str(tmp_path / "absent.json"))

    def test_to_graph(self, loader, triangle_document):
        G = loader.to_graph(CurveDocument.model_validate(triangle_document))
        assert G.edge_ids == ["e12", "e23", "e31"]

    def test_to_graph_requires_components(self, loader):
        with pytest.raises(DocumentError):
            loader.to_graph(CurveDocument())

    def test_to_graph_unknown_component(self, loader):
        document = CurveDocument.model_validate(
            {"components": [{"id": "A"}], "edges": [{"id": "e", "plus": "A", "minus": "B"}]}
        )
        with pytest.raises(DocumentError):
            loader.to_graph(document)

    def test_to_graph_bad_position(self, loader):
        document = CurveDocument.model_validate(
            {
                "components": [{"id": "A", "positions": {"e+": "x"}}, {"id": "B"}],
                "edges": [{"id": "e", "plus": "A", "minus": "B"}],
            }
        )
        with pytest.raises(DocumentError):
            loader.to_graph(document)


class TestSingularities:
    @pytest.fixture
    def loader(self):
        return DocumentLoader()

    def test_catalog_name(self, loader):
        B = loader.singularity(None, "tacnode")
        assert B.n_branches == 2

    def test_document_entry_wins(self, loader):
        document = CurveDocument.model_validate(
            {"singularities": [{"id": "node", "branches": [{"x": "t^2", "y": "t^3"}], "truncation": 20}]}
        )
        B = loader.singularity(document, "node")
        assert B.n_branches == 1
        assert B.truncation == 20

    def test_unknown_singularity(self, loader):
        with pytest.raises(DocumentError):
            loader.singularity(None, "a7")

    def test_bad_branch(self, loader):
        document = CurveDocument.model_validate({"singularities": [{"id": "s", "branches": [{"x": "1 + t", "y": "t"}]}]})
        with pytest.raises(DocumentError):
            loader.singularity(document, "s")

    def test_placements(self, loader, placed_document):
        placements = loader.placements(CurveDocument.model_validate(placed_document))
        assert [p.id for p in placements] == ["p", "q"]
        assert placements[1].points == (1, 2)

    def test_placements_need_a_position(self, loader):
        document = CurveDocument.model_validate({"singularities": [{"id": "p", "catalog": "cusp"}]})
        with pytest.raises(DocumentError):
            loader.placements(document)


class TestParameters:
    @pytest.fixture
    def loader(self):
        return DocumentLoader()

    def test_parse_params(self, loader):
        assert loader.parse_params("e12=1, e23=2/3") == {"e12": "1", "e23": "2/3"}
        assert loader.parse_params(None) == {}

    def test_parse_params_rejects_bare_values(self, loader):
        with pytest.raises(DocumentError):
            loader.parse_params("e12")

    def test_edge_params(self, loader, triangle):
        values = loader.edge_params(triangle, {"e12": "1", "e23": "-1/2", "e31": "0"})
        assert values["e23"] == Fraction(-1, 2)

    def test_unknown_edge(self, loader, triangle):
        with pytest.raises(UnknownEdge):
            loader.edge_params(triangle, {"e12": "1", "e23": "1", "e31": "1", "e99": "1"})

    def test_missing_edge(self, loader, triangle):
        with pytest.raises(DocumentError):
            loader.edge_params(triangle, {"e12": "1"})

    def test_global_differential_needs_every_piece(self, loader, triangle_document):
        triangle_document["differentials"][0]["pieces"].pop("C3")
        document = CurveDocument.model_validate(triangle_document)
        with pytest.raises(MissingDifferential):
            loader.global_differential(document, loader.to_graph(document), None)

    def test_global_differential_k_lookup(self, loader, pair_document):
        document = CurveDocument.model_validate(pair_document)
        G = loader.to_graph(document)
        assert loader.global_differential(document, G, 3).k == 3
        with pytest.raises(MissingDifferential):
            loader.global_differential(document, G, 2)


class TestDigest:
    def test_stable_and_option_sensitive(self, triangle_document):
        loader = DocumentLoader()
        document = CurveDocument.model_validate(triangle_document)
        first = loader.digest(document, k=1)
        assert first.startswith("sha256:")
        assert first == loader.digest(CurveDocument.model_validate(triangle_document), k=1)
        assert first != loader.digest(document, k=2)
        assert loader.digest(document) == loader.digest(document, trials=None)
