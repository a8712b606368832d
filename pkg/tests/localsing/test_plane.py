import pytest

from src.exactnum import SeriesZeroDivision
from src.localsing import plane_polynomial, pullback_plane_differential


class TestPlanePolynomial:
    def test_parse(self):
        poly = plane_polynomial("y^2 - x^3")
        assert poly.total_degree() == 3

    def test_rejects_other_symbols(self):
        with pytest.raises(ValueError):
            plane_polynomial("x + z")


class TestPullback:
    def test_cusp(self, cusp):
        pullback = pullback_plane_differential("y^2 - x^3", cusp, 0)
        assert pullback.principal_part() == {-2: 1}

    def test_node_first_branch(self, node):
        assert pullback_plane_differential("x*y", node, 0).principal_part() == {-1: 1}

    def test_node_second_branch_divides_by_zero(self, node):
        with pytest.raises(SeriesZeroDivision):
            pullback_plane_differential("x*y", node, 1)

    def test_explicit_denominator(self, cusp):
        pullback = pullback_plane_differential("y^2 - x^3", cusp, 0, denominator="y")
        assert pullback.principal_part() == {-2: 2}
