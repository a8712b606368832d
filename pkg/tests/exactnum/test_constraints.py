from fractions import Fraction

import pytest

from src.exactnum import ConstraintSystem, kernel, matrix_rank, transpose


class TestConstraintSystem:
    @pytest.fixture
    def system(self):
        return ConstraintSystem.from_rows(["a", "b", "c"], [[1, 1, 0], [0, 1, 1], [1, 2, 1]])

    def test_rank_and_solution_dimension(self, system):
        assert system.rank == 2
        assert system.solution_dimension == 1

    def test_kernel_basis(self, system):
        assert system.kernel_basis() == [(Fraction(1), Fraction(-1), Fraction(1))]
        assert system.is_satisfied([1, -1, 1])
        assert not system.is_satisfied([1, 0, 0])

    def test_row_space_membership(self, system):
        assert system.contains([1, 2, 1])
        assert system.contains([2, 3, 1])
        assert not system.contains([1, 0, 0])
        assert system.reduce([1, 0, 0]) == (Fraction(0), Fraction(0), Fraction(1))

    def test_reduced_keeps_pivot_rows(self, system):
        reduced = system.reduced()
        assert reduced.n_rows == 2
        assert reduced.labels == ("a-pivot", "b-pivot")
        assert reduced.describe() == ["1*a + -1*c = 0", "1*b + 1*c = 0"]

    def test_stack_requires_same_columns(self, system):
        other = ConstraintSystem.from_rows(["a", "b", "c"], [[0, 0, 1]])
        assert system.stack(other).rank == 3
        with pytest.raises(ValueError):
            system.stack(ConstraintSystem.from_rows(["x"], [[1]]))

    def test_row_length_checked(self):
        with pytest.raises(ValueError):
            ConstraintSystem.from_rows(["a", "b"], [[1, 2, 3]])

    def test_empty_system(self):
        empty = ConstraintSystem.from_rows(["a", "b"], [])
        assert empty.rank == 0
        assert len(empty.kernel_basis()) == 2
        assert ConstraintSystem.from_rows([], [[], []]).rank == 0


class TestMatrixHelpers:
    def test_rank_kernel_transpose(self):
        rows = [[1, 2], [2, 4]]
        assert matrix_rank(rows, 2) == 1
        assert kernel(rows, 2) == [(Fraction(-2), Fraction(1))]
        assert transpose(rows, 2) == [(1, 2), (2, 4)]
