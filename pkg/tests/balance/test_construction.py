import random
from fractions import Fraction

import pytest

from src.balance import (
    GlobalKDifferential,
    IncompleteDifferential,
    check_balancing,
    construct_global,
    equivalence_probe,
    random_harmonic_differential,
    random_slot_differential,
)
from src.curvegraph import Edge, GraphStructureError, NonRationalComponent, build_dual_graph, families, reorient
from src.diffcalc import INFINITY, KDifferential, k_residue, pole_points
from src.exactnum import RationalFunction


class TestConstructGlobal:
    def test_triangle_pieces(self, triangle):
        eta = construct_global(triangle, 1, {"e12": 1, "e23": 2, "e31": 3})
        assert eta.pieces["C1"].f == RationalFunction.from_text("1/z + 3/(z-1)")
        assert eta.pieces["C2"].f == RationalFunction.from_text("-1/z + 2/(z-1)")
        assert eta.pieces["C3"].f == RationalFunction.from_text("-2/z - 3/(z-1)")

    def test_residue_table(self, triangle):
        eta = construct_global(triangle, 1, {"e12": 1, "e23": 2, "e31": 3})
        assert k_residue(eta.pieces["C1"], 0) == 1
        assert k_residue(eta.pieces["C1"], 1) == 3
        assert k_residue(eta.pieces["C1"], INFINITY) == -4
        assert k_residue(eta.pieces["C3"], INFINITY) == 5

    def test_balanced_by_construction(self, triangle):
        for k in (1, 2, 3):
            report = check_balancing(triangle, construct_global(triangle, k, {"e12": 1, "e23": 2, "e31": 3}))
            assert report.local_ok

    def test_zero_parameters_give_zero_pieces(self, triangle):
        eta = construct_global(triangle, 2, {"e12": 0, "e23": 0, "e31": 0})
        assert eta.is_zero

    def test_pair_k4_residues(self, pair):
        eta = construct_global(pair, 4, {"e1": 1})
        assert k_residue(eta.pieces["C1"], 0) == 1
        assert k_residue(eta.pieces["C2"], 0) == -1
        assert k_residue(eta.pieces["C1"], INFINITY) == 1
        assert k_residue(eta.pieces["C2"], INFINITY) == -1

    def test_parameters_must_cover_edges(self, triangle):
        with pytest.raises(GraphStructureError):
            construct_global(triangle, 1, {"e12": 1, "e23": 1})
        with pytest.raises(GraphStructureError):
            construct_global(triangle, 1, {"e12": 1, "e23": 1, "e31": 1, "e99": 1})

    def test_rejects_positive_genus(self):
        with pytest.raises(NonRationalComponent):
            construct_global(families.loops(1, genus=1), 1, {"l1": 1})

    def test_rejects_slot_at_infinity(self):
        G = build_dual_graph(
            [("C1", 0), ("C2", 0)], [Edge(id="e1", plus="C1", minus="C2")], positions={"e1+": "inf"}
        )
        with pytest.raises(GraphStructureError):
            construct_global(G, 1, {"e1": 1})


class TestCheckBalancing:
    def test_cube_pair_passes(self, pair):
        eta = GlobalKDifferential(
            k=3,
            pieces={"C1": KDifferential.from_text(3, "1/z^3"), "C2": KDifferential.from_text(3, "-1/z^3")},
        )
        report = check_balancing(pair, eta)
        assert report.local_ok
        assert report.global_ok

    def test_unbalanced_edge_reported(self, pair):
        eta = GlobalKDifferential(
            k=1, pieces={"C1": KDifferential.from_text(1, "1/z"), "C2": KDifferential.zero(1)}
        )
        report = check_balancing(pair, eta)
        assert not report.local_ok
        # the residue -1 at infinity cancels the slot residue
        assert report.global_ok
        assert report.component_sums == {"C1": 0, "C2": 0}
        assert k_residue(eta.pieces["C1"], INFINITY) == -1
        assert [(e.edge_id, e.sum) for e in report.unbalanced_edges] == [("e1", Fraction(1))]

    def test_even_k_component_sums(self, pair):
        report = check_balancing(pair, construct_global(pair, 2, {"e1": 1}))
        assert report.local_ok
        assert not report.global_ok
        assert report.component_sums == {"C1": 2, "C2": -2}

    def test_missing_piece(self, pair):
        eta = GlobalKDifferential(k=1, pieces={"C1": KDifferential.from_text(1, "1/z")})
        with pytest.raises(IncompleteDifferential):
            check_balancing(pair, eta)

    def test_positive_genus_components_are_skipped(self, caplog):
        G = build_dual_graph([("C1", 0), ("C2", 1)], [Edge(id="e1", plus="C1", minus="C2")])
        eta = GlobalKDifferential(k=1, pieces={"C1": KDifferential.from_text(1, "1/z")})
        report = check_balancing(G, eta)
        assert report.skipped_components == ("C2",)
        assert report.skipped_edges == ("e1",)
        assert report.edges == ()
        assert "W-NONRATIONAL-SKIPPED" in caplog.text

    def test_orientation_independent(self, triangle):
        eta = construct_global(triangle, 1, {"e12": 1, "e23": 2, "e31": 3})
        flipped = reorient(triangle, ["e23"])
        assert check_balancing(flipped, eta).local_ok


class TestGlobalKDifferential:
    def test_uniform_k(self):
        with pytest.raises(ValueError):
            GlobalKDifferential(k=2, pieces={"C1": KDifferential.from_text(1, "1/z")})

    def test_add_and_scale(self, triangle):
        a = construct_global(triangle, 1, {"e12": 1, "e23": 0, "e31": 0})
        b = construct_global(triangle, 1, {"e12": 0, "e23": 1, "e31": 0})
        total = a + b.scale(2)
        assert total == construct_global(triangle, 1, {"e12": 1, "e23": 2, "e31": 0})
        assert (a + a.scale(-1)).is_zero


class TestRandomDraws:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_slot_draws_are_infinity_free(self, triangle, seed):
        eta, coefficients = random_slot_differential(triangle, 1, random.Random(seed), 9)
        assert set(coefficients) == {"C1:e12+", "C1:e31+", "C2:e12-", "C2:e23+", "C3:e23-", "C3:e31-"}
        for piece in eta.pieces.values():
            assert INFINITY not in [p.location for p in pole_points(piece)]
            assert k_residue(piece, INFINITY) == 0

    def test_slot_draws_match_their_coefficients(self, triangle):
        eta, coefficients = random_slot_differential(triangle, 1, random.Random(4), 9)
        assert k_residue(eta.pieces["C1"], 0) == coefficients["C1:e12+"]
        assert k_residue(eta.pieces["C1"], 1) == coefficients["C1:e31+"]
        assert coefficients["C1:e12+"] + coefficients["C1:e31+"] == 0

    def test_single_slot_component_gets_zero(self, chain3):
        eta, coefficients = random_slot_differential(chain3, 1, random.Random(4), 9)
        assert coefficients["C1:e12+"] == 0
        assert eta.pieces["C1"].is_zero

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_harmonic_draws_are_balanced_and_infinity_free(self, theta, seed):
        eta, _ = random_harmonic_differential(theta, 1, random.Random(seed), 9)
        report = check_balancing(theta, eta)
        assert report.local_ok
        assert report.global_ok
        for piece in eta.pieces.values():
            assert INFINITY not in [p.location for p in pole_points(piece)]

    def test_harmonic_draw_on_tree_is_zero(self, chain3):
        eta, coefficients = random_harmonic_differential(chain3, 1, random.Random(0), 9)
        assert eta.is_zero
        assert set(coefficients.values()) == {0}

    def test_infinite_slot_rejected(self):
        G = build_dual_graph(
            [("C1", 0), ("C2", 0)],
            [Edge(id="e1", plus="C1", minus="C2")],
            positions={"e1+": "inf"},
        )
        with pytest.raises(GraphStructureError):
            random_slot_differential(G, 1, random.Random(0), 9)


class TestEquivalenceTrials:
    @pytest.mark.parametrize(
        "graph", [families.triangle(), families.chain(3), families.theta(3), families.random_connected(6, 2, seed=1729)]
    )
    def test_balanced_implies_global_at_k1(self, graph):
        verdict = equivalence_probe(graph, 1, trials=12, seed=3)
        assert verdict.asserted
        assert verdict.implication_holds is True
        assert verdict.global_ok_count == 12
        assert verdict.local_ok_count + verdict.mismatch_count == 12

    def test_unbalanced_trials_are_reported_on_triangle(self, triangle):
        verdict = equivalence_probe(triangle, 1, trials=40, seed=1729)
        assert verdict.holds is False
        assert verdict.mismatch_count > 0
        assert verdict.counterexample is not None
        assert 0 <= verdict.counterexample_trial < 40
        assert "W-GLOBAL-CONDITION-AUTOMATIC" in verdict.warnings

    def test_counterexample_really_is_unbalanced(self, triangle):
        verdict = equivalence_probe(triangle, 1, trials=40, seed=1729)
        c = verdict.counterexample
        edge_sums = [c["C1:e12+"] + c["C2:e12-"], c["C2:e23+"] + c["C3:e23-"], c["C1:e31+"] + c["C3:e31-"]]
        assert any(s != 0 for s in edge_sums)
        assert c["C1:e12+"] + c["C1:e31+"] == 0

    @pytest.mark.parametrize("graph", [families.pair(), families.loops(1)])
    def test_equivalence_holds_when_every_draw_balances(self, graph):
        verdict = equivalence_probe(graph, 1, trials=10, seed=5)
        assert verdict.holds is True
        assert verdict.mismatch_count == 0
        assert verdict.counterexample is None
        assert verdict.local_ok_count == 10

    def test_perturbation_flags_automatic_global_condition(self, triangle):
        verdict = equivalence_probe(triangle, 1, trials=2, seed=5)
        assert verdict.perturbation is not None
        assert not verdict.perturbation.local_ok
        assert verdict.perturbation.global_ok
        assert "W-GLOBAL-CONDITION-AUTOMATIC" in verdict.warnings

    def test_no_perturbation_on_single_edge(self, pair):
        verdict = equivalence_probe(pair, 1, trials=2, seed=5)
        assert verdict.perturbation is None
        assert verdict.warnings == []

    def test_nothing_asserted_for_k2(self, pair):
        verdict = equivalence_probe(pair, 2, trials=4, seed=5)
        assert not verdict.asserted
        assert verdict.holds is None
        assert verdict.implication_holds is None
        assert verdict.local_ok_count == 4

    def test_seeded_run_is_reproducible(self, theta):
        assert equivalence_probe(theta, 1, 5, seed=9) == equivalence_probe(theta, 1, 5, seed=9)
