import json

import pytest
from fastapi.testclient import TestClient

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from src.main import app
from src.curvegraph import families
from src.localsing import catalog


@pytest.fixture
def client():
    return TestClient(app)


# Canonical dual graphs

@pytest.fixture
def triangle():
    return families.triangle()


@pytest.fixture
def pair():
    return families.pair()


@pytest.fixture
def chain3():
    return families.chain(3)


@pytest.fixture
def theta():
    return families.theta(3)


@pytest.fixture
def two_loops():
    return families.loops(2)


# Catalog branch systems

@pytest.fixture
def node():
    return catalog("node")


@pytest.fixture
def cusp():
    return catalog("cusp")


@pytest.fixture
def tacnode():
    return catalog("tacnode")


# Curve documents

@pytest.fixture
def triangle_document():
    return {
        "format_version": "1",
        "components": [{"id": "C1"}, {"id": "C2"}, {"id": "C3"}],
        "edges": [
            {"id": "e12", "plus": "C1", "minus": "C2"},
            {"id": "e23", "plus": "C2", "minus": "C3"},
            {"id": "e31", "plus": "C1", "minus": "C3"},
        ],
        "differentials": [
            {
                "k": 1,
                "pieces": {
                    "C1": "1/z - 1/(z-1)",
                    "C2": "-1/z + 1/(z-1)",
                    "C3": "-1/z + 1/(z-1)",
                },
            }
        ],
    }


@pytest.fixture
def pair_document():
    return {
        "format_version": "1",
        "components": [{"id": "C1"}, {"id": "C2"}],
        "edges": [{"id": "e1", "plus": "C1", "minus": "C2"}],
        "differentials": [{"k": 3, "pieces": {"C1": "1/z^3", "C2": "-1/z^3"}}],
    }


@pytest.fixture
def unbalanced_document():
    return {
        "format_version": "1",
        "components": [{"id": "C1"}, {"id": "C2"}],
        "edges": [{"id": "e1", "plus": "C1", "minus": "C2"}],
        "differentials": [{"k": 1, "pieces": {"C1": "1/z", "C2": "0"}}],
    }


@pytest.fixture
def tree_document():
    return {
        "components": [{"id": "A"}, {"id": "B"}, {"id": "C"}],
        "edges": [{"id": "ab", "plus": "A", "minus": "B"}, {"id": "bc", "plus": "B", "minus": "C"}],
    }


@pytest.fixture
def two_loop_document():
    return {
        "components": [{"id": "C1"}],
        "edges": [{"id": "l1", "plus": "C1", "minus": "C1"}, {"id": "l2", "plus": "C1", "minus": "C1"}],
    }


@pytest.fixture
def placed_document():
    return {
        "components": [{"id": "P1"}],
        "singularities": [
            {"id": "p", "catalog": "cusp", "position": ["0"]},
            {"id": "q", "catalog": "node", "position": ["1", "2"]},
        ],
    }


@pytest.fixture
def write_document(tmp_path):
    def write(document, name="curve.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write
