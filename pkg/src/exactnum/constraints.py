import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .rational import format_rational, to_domain, to_fraction

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def _rref(rows: Sequence[Vector], n_columns: int) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    if not rows or n_columns == 0:
        return (), ()
    matrix = DomainMatrix([[to_domain(v) for v in row] for row in rows], (len(rows), n_columns), QQ)
    reduced, pivots = matrix.rref()
    reduced_rows = reduced.to_list()[: len(pivots)]
    return tuple(tuple(to_fraction(v) for v in row) for row in reduced_rows), tuple(pivots)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear conditions sum_j rows[i][j] * x_j = 0 over QQ, with named unknowns."""

    columns: Tuple[str, ...]
    rows: Tuple[Vector, ...] = ()
    labels: Tuple[str, ...] = field(default=())

    @classmethod
    def from_rows(
        cls,
        columns: Sequence[str],
        rows: Sequence[Sequence],
        labels: Optional[Sequence[str]] = None,
    ) -> "ConstraintSystem":
        columns = tuple(columns)
        converted = []
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"Row of length {len(row)} does not match {len(columns)} columns")
            converted.append(tuple(to_fraction(v) for v in row))
        labels = tuple(labels) if labels is not None else tuple(f"r{i}" for i in range(len(converted)))
        return cls(columns, tuple(converted), labels)

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @cached_property
    def _echelon(self) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
        return _rref(self.rows, self.n_columns)

    @property
    def rref_rows(self) -> Tuple[Vector, ...]:
        return self._echelon[0]

    @property
    def pivots(self) -> Tuple[int, ...]:
        return self._echelon[1]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def solution_dimension(self) -> int:
        return self.n_columns - self.rank

    def reduced(self) -> "ConstraintSystem":
        """Equivalent system made of the nonzero reduced rows."""
        labels = tuple(f"{self.columns[p]}-pivot" for p in self.pivots)
        return ConstraintSystem(self.columns, self.rref_rows, labels)

    def kernel_basis(self) -> List[Vector]:
        pivot_set = set(self.pivots)
        basis = []
        for free in range(self.n_columns):
            if free in pivot_set:
                continue
            vector = [Fraction(0)] * self.n_columns
            vector[free] = Fraction(1)
            for row, pivot in zip(self.rref_rows, self.pivots):
                vector[pivot] = -row[free]
            basis.append(tuple(vector))
        return basis

    def evaluate(self, vector: Sequence) -> Vector:
        vector = [to_fraction(v) for v in vector]
        if len(vector) != self.n_columns:
            raise ValueError(f"Vector of length {len(vector)} does not match {self.n_columns} columns")
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)

    def is_satisfied(self, vector: Sequence) -> bool:
        return all(value == 0 for value in self.evaluate(vector))

    def reduce(self, vector: Sequence) -> Vector:
        """Remainder of vector modulo the row space."""
        remainder = [to_fraction(v) for v in vector]
        for row, pivot in zip(self.rref_rows, self.pivots):
            factor = remainder[pivot]
            if factor:
                remainder = [r - factor * x for r, x in zip(remainder, row)]
        return tuple(remainder)

    def contains(self, vector: Sequence) -> bool:
        """Row-space membership."""
        return not any(self.reduce(vector))

    def stack(self, other: "ConstraintSystem") -> "ConstraintSystem":
        if self.columns != other.columns:
            raise ValueError("Cannot stack constraint systems over different unknowns")
        return ConstraintSystem(self.columns, self.rows + other.rows, self.labels + other.labels)

    def describe(self) -> List[str]:
        lines = []
        for row in self.reduced().rows:
            terms = [f"{format_rational(c)}*{name}" for c, name in zip(row, self.columns) if c != 0]
            lines.append(" + ".join(terms) + " = 0")
        return lines


def matrix_rank(rows: Sequence[Sequence], n_columns: int) -> int:
    return ConstraintSystem.from_rows([f"x{j}" for j in range(n_columns)], rows).rank


def kernel(rows: Sequence[Sequence], n_columns: int) -> List[Vector]:
    return ConstraintSystem.from_rows([f"x{j}" for j in range(n_columns)], rows).kernel_basis()


def transpose(rows: Sequence[Sequence], n_columns: int) -> List[Vector]:
    return [tuple(row[j] for row in rows) for j in range(n_columns)]
