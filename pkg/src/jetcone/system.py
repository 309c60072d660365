"""Polynomial systems and directional second-order tangent algebra.

Everything here is computed relative to the supplied generating set, not
the full vanishing ideal of the germ: computing the initial ideal would
need standard bases, which is out of scope.  Reports downstream carry the
"relative to the given generators" label for this reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidSystemError, PreconditionError
from .fields import Field, Scalar, coerce_scalar, scalar_is_zero
from .linalg import AffineSubspace, solve_affine
from .poly import Polynomial

Vector = tuple[Scalar, ...]

#: Outputs are computed from the supplied generators, which may generate a
#: proper subideal of the full vanishing ideal.
GENERATOR_SEMANTICS = "relative to the given generators"


@dataclass(frozen=True)
class PolySystem:
    """Generating set f_1..f_p of the defining ideal plus ambient data."""

    n: int
    field: Field
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise InvalidSystemError("ambient dimension must be positive")
        if not self.generators:
            raise InvalidSystemError("at least one generator is required")
        origin = self.zero_vector()
        for i, gen in enumerate(self.generators):
            if gen.n_vars != self.n:
                raise InvalidSystemError(
                    f"generator {i + 1} has {gen.n_vars} variables, expected {self.n}"
                )
            if not gen:
                raise InvalidSystemError(f"generator {i + 1} is the zero polynomial")
            value = gen.evaluate(origin)
            if not scalar_is_zero(value, self.field.is_exact):
                raise InvalidSystemError(
                    f"generator {i + 1} does not vanish at the reference point "
                    f"(value {value})"
                )
            if not self.field.is_complex:
                for coeff in gen.terms.values():
                    if isinstance(coeff, complex):
                        raise InvalidSystemError(
                            "complex coefficients require the complex field"
                        )

    @property
    def p(self) -> int:
        return len(self.generators)

    def zero_vector(self) -> Vector:
        if self.field is Field.RATIONAL:
            return (Fraction(0),) * self.n
        if self.field is Field.REAL:
            return (0.0,) * self.n
        return (complex(0.0),) * self.n

    def is_zero(self, value: Scalar) -> bool:
        return scalar_is_zero(value, self.field.is_exact)

    def coerce(self, value: Scalar) -> Scalar:
        return coerce_scalar(self.field, value)

    def to_float(self) -> "PolySystem":
        """Float copy for the numerical sampler (complex stays complex)."""
        if self.field is Field.RATIONAL:
            return PolySystem(
                self.n, Field.REAL, tuple(g.to_float() for g in self.generators)
            )
        return self


@dataclass(frozen=True)
class InitialData:
    order: int
    initial_form: Polynomial
    next_form: Polynomial


def initial_data(sys: PolySystem) -> tuple[InitialData, ...]:
    """Per generator: order m, initial form f^[*], next form f^[*]+1."""
    out = []
    for gen in sys.generators:
        m = gen.order()
        out.append(
            InitialData(
                order=m,
                initial_form=gen.homogeneous_component(m),
                next_form=gen.homogeneous_component(m + 1),
            )
        )
    return tuple(out)


def _check_direction(sys: PolySystem, u: Vector) -> None:
    if len(u) != sys.n:
        raise PreconditionError(
            f"direction has dimension {len(u)}, ambient dimension is {sys.n}"
        )
    if all(sys.is_zero(x) for x in u):
        raise PreconditionError("direction must be nonzero")


def tangent_cone_membership(sys: PolySystem, u: Vector) -> bool:
    """True iff every initial form vanishes at u (generator-level check)."""
    _check_direction(sys, u)
    return all(
        sys.is_zero(data.initial_form.evaluate(u)) for data in initial_data(sys)
    )


def next_form_consistency(sys: PolySystem, u: Vector) -> bool:
    """True iff every next form f^[*]+1 vanishes at u.

    This is the compatibility condition under which the affine system for
    the algebraic second-order tangent set collapses to the homogeneous
    jet-space system.
    """
    if not tangent_cone_membership(sys, u):
        raise PreconditionError(
            "next_form_consistency requires u in the tangent cone of the generators"
        )
    return all(sys.is_zero(data.next_form.evaluate(u)) for data in initial_data(sys))


def t2a_system(sys: PolySystem, u: Vector) -> tuple[list[Vector], list[Scalar]]:
    """Linear system for the algebraic directional second-order tangent set:
    <grad f_i^[*](u), w> = -2 f_i^[*]+1(u) for each generator.

    (Equivalent to (1/2)<grad f^[*](u), w> + f^[*]+1(u) = 0.)
    """
    rows: list[Vector] = []
    rhs: list[Scalar] = []
    for data in initial_data(sys):
        rows.append(
            tuple(sys.coerce(g.evaluate(u)) for g in data.initial_form.gradient())
        )
        rhs.append(sys.coerce(-2 * data.next_form.evaluate(u)))
    return rows, rhs


def algebraic_t2(sys: PolySystem, u: Vector) -> AffineSubspace:
    """Exact affine description of the algebraic second-order tangent set
    along u; EMPTY when the system is inconsistent."""
    _check_direction(sys, u)
    rows, rhs = t2a_system(sys, u)
    return solve_affine(rows, rhs, sys.n, exact=sys.field.is_exact)


def jet_space_system(sys: PolySystem, u: Vector) -> list[Vector]:
    return [
        tuple(sys.coerce(g.evaluate(u)) for g in data.initial_form.gradient())
        for data in initial_data(sys)
    ]


def jet_space_t2(
    sys: PolySystem, u: Vector, enforce_consistency: bool = True
) -> AffineSubspace:
    """Solution space of the homogeneous system <grad f_i^[*](u), w> = 0.

    Under next-form consistency this is a linear subspace equal to
    ``algebraic_t2``; without it the homogeneous system is not the right
    reformulation, hence the precondition.
    """
    _check_direction(sys, u)
    if enforce_consistency and not next_form_consistency(sys, u):
        raise PreconditionError(
            "jet_space_t2 requires next_form_consistency(sys, u); "
            "use algebraic_t2 for the affine set"
        )
    rows = jet_space_system(sys, u)
    zero = Fraction(0) if sys.field.is_exact else field_zero_for(sys.field)
    rhs = [zero] * len(rows)
    return solve_affine(rows, rhs, sys.n, exact=sys.field.is_exact)


def field_zero_for(field: Field) -> Scalar:
    return complex(0.0) if field.is_complex else 0.0


def jet_admissible(sys: PolySystem, u: Vector, w: Vector) -> bool:
    """Check that (u, w) satisfies the full admissibility system: u on the
    tangent cone and w in the affine second-order set."""
    if not tangent_cone_membership(sys, u):
        return False
    from .linalg import satisfies

    rows, rhs = t2a_system(sys, u)
    return satisfies(rows, rhs, w, exact=sys.field.is_exact)
