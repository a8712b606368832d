from fractions import Fraction

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from src.curvegraph import (
    Flow,
    arithmetic_genus,
    arithmetic_genus_from_delta,
    betti1,
    families,
    harmonic_space,
    is_harmonic,
    normalization_genus,
    residue_data_dimension,
    tropical_jacobian_dim,
    vertex_balance_matrix,
)


class TestGenusFormulas:
    def test_triangle(self, triangle):
        assert betti1(triangle) == 1
        assert arithmetic_genus(triangle) == 1
        assert tropical_jacobian_dim(triangle) == 1

    def test_tree(self, chain3):
        assert betti1(chain3) == 0
        assert arithmetic_genus(chain3) == 0

    def test_theta(self, theta):
        assert betti1(theta) == 2

    def test_loops(self, two_loops):
        assert betti1(two_loops) == 2

    def test_positive_genus_components(self):
        G = families.loops(1, genus=2)
        assert normalization_genus(G) == 2
        assert arithmetic_genus(G) == 3
        assert residue_data_dimension(G) == 3

    def test_genus_from_delta(self):
        assert arithmetic_genus_from_delta(0, [1, 1, 1]) == 3
        assert arithmetic_genus_from_delta(2, [1, 2]) == 5

    def test_genus_from_delta_rejects_zero_delta(self):
        with pytest.raises(ValueError):
            arithmetic_genus_from_delta(0, [0])
        with pytest.raises(ValueError):
            arithmetic_genus_from_delta(-1, [])


class TestHarmonicFlows:
    def test_vertex_balance_matrix(self, triangle):
        system = vertex_balance_matrix(triangle)
        assert system.labels == ("C1", "C2", "C3")
        assert system.rank == 2
        # every column has one +1 and one -1
        for j in range(3):
            assert sorted(row[j] for row in system.rows) == [-1, 0, 1]

    def test_triangle_cycle_is_harmonic(self, triangle):
        flow = Flow(values={"e12": Fraction(1), "e23": Fraction(1), "e31": Fraction(-1)})
        assert is_harmonic(triangle, flow)
        assert not is_harmonic(triangle, flow.negated_on(["e31"]))

    @pytest.mark.parametrize(
        "graph",
        [
            families.triangle(),
            families.chain(4),
            families.theta(4),
            families.loops(3),
            families.star(3),
            families.random_connected(6, 3, seed=5),
        ],
    )
    def test_harmonic_dimension_is_betti1(self, graph):
        flows = harmonic_space(graph)
        assert len(flows) == betti1(graph)
        assert all(is_harmonic(graph, flow) for flow in flows)

    @given(
        st.integers(min_value=2, max_value=7),
        st.integers(min_value=0, max_value=4),
        st.integers(min_value=0, max_value=10**6),
    )
    @hypothesis_settings(max_examples=40, deadline=None)
    def test_vertex_balance_rank_on_random_graphs(self, n_vertices, n_extra_edges, seed):
        graph = families.random_connected(n_vertices, n_extra_edges, seed)
        system = vertex_balance_matrix(graph)
        assert system.rank == n_vertices - 1
        assert len(harmonic_space(graph)) == betti1(graph)
        # the vertex rows sum to zero
        for j in range(len(graph.edges)):
            assert sum(row[j] for row in system.rows) == 0
