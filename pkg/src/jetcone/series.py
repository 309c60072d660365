"""Truncated vector power series in one parameter t.

``TruncatedSeries`` stores the coefficients of t^0 .. t^N of a curve
gamma(t) in K^d.  Composition of a polynomial with a series is exact through
the stated order; terms of the polynomial that only contribute above the
truncation are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fields import Scalar
from .poly import Polynomial


@dataclass(frozen=True)
class TruncatedSeries:
    dim: int
    order: int
    coeffs: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if self.order < 2:
            raise ValueError("truncation order must be at least 2")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("need exactly order+1 coefficient vectors")
        for vec in self.coeffs:
            if len(vec) != self.dim:
                raise ValueError("coefficient vector has wrong dimension")

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[Scalar]]) -> "TruncatedSeries":
        coeffs = tuple(tuple(v) for v in vectors)
        return cls(dim=len(coeffs[0]), order=len(coeffs) - 1, coeffs=coeffs)

    @classmethod
    def zero(cls, dim: int, order: int) -> "TruncatedSeries":
        zero_vec = (Fraction(0),) * dim
        return cls(dim=dim, order=order, coeffs=(zero_vec,) * (order + 1))

    def coefficient(self, k: int) -> tuple[Scalar, ...]:
        return self.coeffs[k]

    def component(self, i: int) -> tuple[Scalar, ...]:
        """Scalar coefficient list of coordinate i, t^0 .. t^N."""
        return tuple(vec[i] for vec in self.coeffs)

    def scalar_coeffs(self) -> tuple[Scalar, ...]:
        if self.dim != 1:
            raise ValueError("scalar_coeffs requires a 1-dimensional series")
        return self.component(0)

    def truncated(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot truncate upward; use padded")
        return TruncatedSeries(self.dim, order, self.coeffs[: order + 1])

    def padded(self, order: int) -> "TruncatedSeries":
        """Extend with zero coefficients, treating the series as an exact
        polynomial curve in t."""
        if order <= self.order:
            return self.truncated(order)
        zero_vec = tuple(0 * c for c in self.coeffs[0])
        extra = (zero_vec,) * (order - self.order)
        return TruncatedSeries(self.dim, order, self.coeffs + extra)

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Coefficientwise sum; the result order is min(N1, N2)."""
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        order = min(self.order, other.order)
        coeffs = tuple(
            tuple(a + b for a, b in zip(self.coeffs[k], other.coeffs[k]))
            for k in range(order + 1)
        )
        return TruncatedSeries(self.dim, order, coeffs)

    def scale(self, factor: Scalar) -> "TruncatedSeries":
        return TruncatedSeries(
            self.dim,
            self.order,
            tuple(tuple(factor * c for c in vec) for vec in self.coeffs),
        )

    def to_json(self) -> dict:
        from .fields import vector_to_json

        return {
            "dim": self.dim,
            "order": self.order,
            "coeffs": [vector_to_json(vec) for vec in self.coeffs],
        }


def _mul_series(a: list[Scalar], b: list[Scalar], order: int) -> list[Scalar]:
    out = [0] * (order + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        top = order - i
        for j, bj in enumerate(b[: top + 1]):
            if bj == 0:
                continue
            out[i + j] += ai * bj
    return out


def compose_series(
    f: Polynomial, s: TruncatedSeries, order: int | None = None
) -> TruncatedSeries:
    """Coefficients of f(s(t)) in t, exact through the target order.

    With ``order=None`` the truncation order of ``s`` is kept.  A higher
    target order treats ``s`` as an exact polynomial curve (higher
    coefficients zero), which is how arc residuals are verified.
    """
    if f.n_vars != s.dim:
        raise ValueError("polynomial arity does not match series dimension")
    target = s.order if order is None else order
    padded = s.padded(target) if target > s.order else s.truncated(target)
    comps = [list(padded.component(i)) for i in range(s.dim)]
    one = [1] + [0] * target
    power_cache: dict[tuple[int, int], list[Scalar]] = {}

    def powered(i: int, e: int) -> list[Scalar]:
        key = (i, e)
        cached = power_cache.get(key)
        if cached is not None:
            return cached
        if e == 1:
            result = comps[i]
        else:
            half = powered(i, e // 2)
            result = _mul_series(half, half, target)
            if e % 2:
                result = _mul_series(result, comps[i], target)
        power_cache[key] = result
        return result

    acc = [0] * (target + 1)
    for exps, coeff in f.terms.items():
        term = one
        for i, e in enumerate(exps):
            if e:
                term = _mul_series(term, powered(i, e), target)
        for k, value in enumerate(term):
            if value != 0:
                acc[k] += coeff * value
    return TruncatedSeries(1, target, tuple((v,) for v in acc))
