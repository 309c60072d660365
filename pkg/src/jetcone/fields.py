"""Coefficient fields and scalar helpers.

Three coefficient fields are supported: exact rationals (the default,
required for certificates and lifting), real floats, and complex floats.
Scalars are plain Python values -- ``Fraction``, ``float`` or ``complex`` --
so arithmetic everywhere is ordinary Python arithmetic.  Exact complex
rationals are deliberately not provided; complex computations go through
``complex`` floats.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

from .errors import ProblemError

Scalar = Union[Fraction, float, complex]

#: Absolute tolerance for zero tests on float-valued scalars.
ZERO_TOL = 1e-10

#: Floating pivots below this magnitude are treated as ill-conditioned.
PIVOT_TOL = 1e-12


class Field(str, enum.Enum):
    RATIONAL = "rational"
    REAL = "real"
    COMPLEX = "complex"

    @property
    def is_exact(self) -> bool:
        return self is Field.RATIONAL

    @property
    def is_complex(self) -> bool:
        return self is Field.COMPLEX


def field_zero(field: Field) -> Scalar:
    if field is Field.RATIONAL:
        return Fraction(0)
    if field is Field.REAL:
        return 0.0
    return complex(0.0)


def field_one(field: Field) -> Scalar:
    if field is Field.RATIONAL:
        return Fraction(1)
    if field is Field.REAL:
        return 1.0
    return complex(1.0)


def scalar_is_zero(value: Scalar, exact: bool, tol: float = ZERO_TOL) -> bool:
    if exact:
        return value == 0
    return abs(value) <= tol


def coerce_coordinate(field: Field, value) -> Scalar:
    """Convert a JSON coordinate (int, float, "p/q" string, or [re, im]
    pair) into a scalar of the given field.

    Under the exact field, non-integral floats are rejected: decimal
    coordinates must be written as "p/q" strings so the input is
    reproducible.
    """
    if isinstance(value, bool):
        raise ProblemError(f"boolean is not a valid coordinate: {value!r}")
    if isinstance(value, (list, tuple)):
        if field is not Field.COMPLEX:
            raise ProblemError(
                f"[re, im] coordinates are only valid under the complex field: {value!r}"
            )
        if len(value) != 2:
            raise ProblemError(f"complex coordinate must be a [re, im] pair: {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemError(f"cannot parse coordinate {value!r}: {exc}") from exc
        return _from_fraction(field, frac)
    if isinstance(value, int):
        return _from_fraction(field, Fraction(value))
    if isinstance(value, float):
        if field is Field.RATIONAL:
            if value != int(value):
                raise ProblemError(
                    f"decimal coordinate {value!r} under the rational field; "
                    'write it as a "p/q" string'
                )
            return Fraction(int(value))
        return complex(value) if field is Field.COMPLEX else value
    if isinstance(value, complex):
        if field is not Field.COMPLEX:
            raise ProblemError("complex coordinate under a real field")
        return value
    raise ProblemError(f"unsupported coordinate type: {type(value).__name__}")


def _from_fraction(field: Field, frac: Fraction) -> Scalar:
    if field is Field.RATIONAL:
        return frac
    if field is Field.REAL:
        return float(frac)
    return complex(float(frac))


def coerce_vector(field: Field, values, n: int, what: str = "vector") -> tuple:
    values = list(values)
    if len(values) != n:
        raise ProblemError(f"{what} has length {len(values)}, expected {n}")
    return tuple(coerce_coordinate(field, v) for v in values)


def coerce_scalar(field: Field, value: Scalar) -> Scalar:
    """Normalize a computed scalar to the canonical type of the field
    (polynomial evaluation can yield plain ints, e.g. for zero polynomials)."""
    if field is Field.RATIONAL:
        return value if isinstance(value, Fraction) else Fraction(value)
    if field is Field.REAL:
        return float(value)
    return complex(value)


def scalar_to_float(value: Scalar) -> Union[float, complex]:
    if isinstance(value, Fraction):
        return float(value)
    return value


def scalar_to_json(value: Scalar):
    """JSON encoding: exact rationals as "p/q" strings, floats as numbers,
    complex values as [re, im] pairs."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return float(value)


def vector_to_json(values) -> list:
    return [scalar_to_json(v) for v in values]
