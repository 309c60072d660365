"""Linear algebra over exact rationals (with a float fallback).

Solving the defining linear systems exactly is what makes the affine
descriptions and certificates trustworthy, so everything here is plain
Gauss-Jordan over ``Fraction`` with a deterministic pivot rule.  The same
routines run over floats with magnitude pivoting and a conditioning
threshold for the complex-coefficient paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import IllConditionedError
from .fields import PIVOT_TOL, Scalar, vector_to_json

Vector = tuple[Scalar, ...]
Matrix = list[list[Scalar]]


@dataclass(frozen=True)
class AffineSubspace:
    """Solution set of a linear system: empty, or point + span(basis)."""

    ambient_dim: int
    point: Optional[Vector]
    basis: tuple[Vector, ...]

    @property
    def is_empty(self) -> bool:
        return self.point is None

    @property
    def dim(self) -> Optional[int]:
        return None if self.is_empty else len(self.basis)

    def element(self, weights: Sequence[Scalar]) -> Vector:
        """point + sum_i weights[i] * basis[i]."""
        if self.point is None:
            raise ValueError("empty subspace has no elements")
        if len(weights) != len(self.basis):
            raise ValueError("one weight per basis vector required")
        out = list(self.point)
        for weight, vec in zip(weights, self.basis):
            for i, v in enumerate(vec):
                out[i] += weight * v
        return tuple(out)

    def is_full_space(self) -> bool:
        return not self.is_empty and len(self.basis) == self.ambient_dim

    def to_json(self) -> dict:
        if self.is_empty:
            return {"kind": "empty"}
        return {
            "kind": "nonempty",
            "point": vector_to_json(self.point),
            "basis": [vector_to_json(b) for b in self.basis],
        }

    @classmethod
    def empty(cls, ambient_dim: int) -> "AffineSubspace":
        return cls(ambient_dim, None, ())

    @classmethod
    def full_space(cls, ambient_dim: int) -> "AffineSubspace":
        point = (Fraction(0),) * ambient_dim
        basis = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(ambient_dim))
            for i in range(ambient_dim)
        )
        return cls(ambient_dim, point, basis)


def _exact_is_zero(value: Scalar) -> bool:
    return value == 0


def _float_is_zero(value: Scalar) -> bool:
    return abs(value) < PIVOT_TOL


def _exact_score(value: Scalar) -> int:
    # deterministic pivot rule: largest numerator/denominator bit length
    frac = Fraction(value)
    return max(frac.numerator.bit_length(), frac.denominator.bit_length())


def _float_score(value: Scalar) -> float:
    return abs(value)


def _rules(exact: bool):
    if exact:
        return _exact_is_zero, _exact_score
    return _float_is_zero, _float_score


def rref(
    rows: Matrix, n_cols: int, exact: bool = True
) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (pivoting over the first ``n_cols`` columns
    only; trailing columns ride along as right-hand sides).

    Returns the reduced matrix and the pivot column indices.  The reduced
    form is unique, so the result does not depend on generator order.
    """
    is_zero, score = _rules(exact)
    mat = [list(row) for row in rows]
    pivot_cols: list[int] = []
    r = 0
    for col in range(n_cols):
        best = None
        for i in range(r, len(mat)):
            if not is_zero(mat[i][col]):
                if best is None or score(mat[i][col]) > score(mat[best][col]):
                    best = i
        if best is None:
            continue
        mat[r], mat[best] = mat[best], mat[r]
        pivot = mat[r][col]
        if not exact and abs(pivot) < PIVOT_TOL:
            raise IllConditionedError(
                f"pivot magnitude {abs(pivot):.3e} below {PIVOT_TOL:.0e}"
            )
        mat[r] = [v / pivot for v in mat[r]]
        for i in range(len(mat)):
            if i == r:
                continue
            factor = mat[i][col]
            if is_zero(factor):
                continue
            mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivot_cols.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivot_cols


def solve_affine(
    rows: Sequence[Sequence[Scalar]],
    rhs: Sequence[Scalar],
    n: int,
    exact: bool = True,
) -> AffineSubspace:
    """Exact solution set of ``rows @ w = rhs`` as an affine subspace.

    An inconsistent system yields the EMPTY subspace; this is a first-class
    outcome, not an error.
    """
    if not rows:
        return AffineSubspace.full_space(n)
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    mat, pivot_cols = rref(augmented, n, exact=exact)
    is_zero, _ = _rules(exact)
    rank = len(pivot_cols)
    for row in mat[rank:]:
        if not is_zero(row[n]):
            return AffineSubspace.empty(n)
    zero = Fraction(0) if exact else 0.0
    point = [zero] * n
    for r, col in enumerate(pivot_cols):
        point[col] = mat[r][n]
    free_cols = [c for c in range(n) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        vec = [zero] * n
        vec[free] = Fraction(1) if exact else 1.0
        for r, col in enumerate(pivot_cols):
            vec[col] = -mat[r][free]
        basis.append(tuple(vec))
    return AffineSubspace(n, tuple(point), tuple(basis))


def matrix_rank(rows: Sequence[Sequence[Scalar]], exact: bool = True) -> int:
    if not rows:
        return 0
    _, pivots = rref([list(r) for r in rows], len(rows[0]), exact=exact)
    return len(pivots)


def solve_square(
    matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], exact: bool = True
) -> Optional[Vector]:
    """Unique solution of a square system, or None if singular."""
    p = len(matrix)
    sub = solve_affine(matrix, rhs, p, exact=exact)
    if sub.is_empty or sub.basis:
        return None
    return sub.point


def first_invertible_columns(
    rows: Sequence[Sequence[Scalar]], exact: bool = True
) -> Optional[tuple[int, ...]]:
    """Lexicographically first column subset of size len(rows) with nonzero
    determinant, or None when the rows are dependent."""
    p = len(rows)
    if p == 0:
        return ()
    n = len(rows[0])
    if matrix_rank(rows, exact=exact) < p:
        return None
    for cols in itertools.combinations(range(n), p):
        square = [[row[c] for c in cols] for row in rows]
        if matrix_rank(square, exact=exact) == p:
            return cols
    return None


def dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Scalar:
    total: Scalar = 0
    for x, y in zip(a, b):
        total += x * y
    return total


def satisfies(
    rows: Sequence[Sequence[Scalar]],
    rhs: Sequence[Scalar],
    w: Sequence[Scalar],
    exact: bool = True,
    tol: float = 1e-10,
) -> bool:
    """Check rows @ w = rhs, exactly or within ``tol``."""
    for row, b in zip(rows, rhs):
        residual = dot(row, w) - b
        if exact:
            if residual != 0:
                return False
        elif abs(residual) > tol:
            return False
    return True
