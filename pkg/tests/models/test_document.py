import pytest

from src.models.document import CurveDocument, DifferentialEntry, EdgeEntry, SingularityEntry


class TestCurveDocument:
    def test_defaults(self):
        document = CurveDocument()
        assert document.format_version == "1"
        assert document.components == []

    def test_full_document(self, triangle_document):
        document = CurveDocument(**triangle_document)
        assert len(document.edges) == 3
        assert document.components[0].genus == 0
        assert document.differentials[0].k == 1

    def test_extra_fields_rejected(self):
        with pytest.raises(ValueError):
            CurveDocument(components=[], comment="nope")


class TestEntries:
    def test_edge_length_positive(self):
        with pytest.raises(ValueError):
            EdgeEntry(id="e", plus="A", minus="B", length=0)

    def test_singularity_catalog(self):
        entry = SingularityEntry(id="s", catalog="cusp", position=["0"])
        assert entry.branches is None

    @pytest.mark.parametrize(
        "fields",
        [{}, {"catalog": "cusp", "branches": [{"x": "t^2", "y": "t^3"}]}],
    )
    def test_singularity_needs_one_source(self, fields):
        with pytest.raises(ValueError):
            SingularityEntry(id="s", **fields)

    def test_differential_needs_one_source(self):
        with pytest.raises(ValueError):
            DifferentialEntry(k=1)
        with pytest.raises(ValueError):
            DifferentialEntry(k=1, pieces={"C1": "0"}, edge_params={"e": "1"})

    def test_differential_k_positive(self):
        with pytest.raises(ValueError):
            DifferentialEntry(k=0, pieces={})
