"""Surjectivity certificates and constructive second-jet lifting.

A direction u on the tangent cone of the system is *certified* when one of
four structural conditions holds; each comes with witness data that can be
re-verified exactly:

  SMOOTH              Jacobian of the generators at 0 has full rank p.
  HOMOGENEOUS_CONE    every generator is homogeneous.
  HYPERSURFACE_NONDEG p = 1 and the initial form has nonzero gradient at u.
  CI_NONDEG           the p x n matrix of initial-form gradients at u has
                      rank p.

On certified input, any w satisfying the affine second-order system is
realized by an explicit truncated arc

    gamma(t) = t*u + (1/2) t^2 w + t^2 (0, s(t)),

where the correction s(t) lives in the witness coordinate block and is
solved order by order: writing s = sum_{k>=1} s_k t^k, the unknown s_k
first enters the scaled residual G_i(t, s) = t^(-m_i) f_i(gamma(t)) at
order t^(k+1), linearly through the invertible block A of initial-form
gradients, so A s_k = -(order-(k+1) coefficient of G with s_k = 0).  This
is the analytic implicit function theorem run as formal Newton steps;
under exact arithmetic every computable residual coefficient of a
successful lift vanishes identically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    CertificateError,
    InadmissibleJetError,
    LiftError,
    PreconditionError,
)
from .fields import Scalar, vector_to_json
from .linalg import first_invertible_columns, matrix_rank, satisfies, solve_square
from .poly import Polynomial
from .series import TruncatedSeries, compose_series
from .system import (
    PolySystem,
    Vector,
    initial_data,
    jet_space_system,
    t2a_system,
    tangent_cone_membership,
)

#: Default truncation order for lifted arcs (CLI-overridable).
DEFAULT_TRUNCATION = 8


class CertClass(str, enum.Enum):
    SMOOTH = "smooth"
    HOMOGENEOUS_CONE = "homogeneous_cone"
    HYPERSURFACE_NONDEG = "hypersurface_nondeg"
    CI_NONDEG = "ci_nondeg"
    NONE = "none"


#: Certificate preference. A nondegenerate hypersurface is reported as such
#: even when it is also smooth, matching the canonical worked example.
CHECK_ORDER = (
    CertClass.HYPERSURFACE_NONDEG,
    CertClass.SMOOTH,
    CertClass.HOMOGENEOUS_CONE,
    CertClass.CI_NONDEG,
)


@dataclass(frozen=True)
class Certificate:
    kind: CertClass
    passing: tuple[CertClass, ...]
    jacobian_at_zero: Optional[tuple[Vector, ...]] = None
    homogeneity_degrees: Optional[tuple[int, ...]] = None
    initial_gradients: Optional[tuple[Vector, ...]] = None
    block_columns: Optional[tuple[int, ...]] = None
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        witness: dict = {}
        if self.kind is CertClass.SMOOTH:
            witness["jacobian_at_zero"] = [vector_to_json(r) for r in self.jacobian_at_zero]
        elif self.kind is CertClass.HOMOGENEOUS_CONE:
            witness["homogeneity_degrees"] = list(self.homogeneity_degrees)
        elif self.kind is CertClass.HYPERSURFACE_NONDEG:
            witness["initial_gradient"] = vector_to_json(self.initial_gradients[0])
        elif self.kind is CertClass.CI_NONDEG:
            witness["initial_gradients"] = [vector_to_json(r) for r in self.initial_gradients]
        if self.block_columns is not None:
            witness["block_columns"] = list(self.block_columns)
        out = {
            "class": self.kind.value,
            "witness": witness,
            "passing": [c.value for c in self.passing],
        }
        if self.failures:
            out["failures"] = list(self.failures)
        return out


def _initial_gradient_rows(sys: PolySystem, u: Vector) -> tuple[Vector, ...]:
    return tuple(jet_space_system(sys, u))


def classify(sys: PolySystem, u: Vector) -> Certificate:
    """Certify (sys, 0, u) into one of the four surjectivity classes.

    Precondition: u is a nonzero direction on the tangent cone of the
    generators.  All classes that verify are listed in ``passing``; the
    reported class is the first one in ``CHECK_ORDER``.
    """
    if not tangent_cone_membership(sys, u):
        raise PreconditionError("classify requires u in the tangent cone")
    exact = sys.field.is_exact
    p = sys.p
    origin = sys.zero_vector()

    jacobian = tuple(
        tuple(sys.coerce(g.evaluate(origin)) for g in gen.gradient())
        for gen in sys.generators
    )
    smooth_ok = matrix_rank(jacobian, exact=exact) == p

    degrees: list[int] = []
    cone_ok = True
    for gen in sys.generators:
        if gen.is_homogeneous():
            degrees.append(gen.order())
        else:
            cone_ok = False

    rows = _initial_gradient_rows(sys, u)
    hyp_ok = p == 1 and any(not sys.is_zero(v) for v in rows[0])
    ci_ok = matrix_rank(rows, exact=exact) == p
    block = first_invertible_columns(rows, exact=exact) if ci_ok else None

    results = {
        CertClass.SMOOTH: smooth_ok,
        CertClass.HOMOGENEOUS_CONE: cone_ok,
        CertClass.HYPERSURFACE_NONDEG: hyp_ok,
        CertClass.CI_NONDEG: ci_ok,
    }
    passing = tuple(c for c in CHECK_ORDER if results[c])
    if not passing:
        failures = (
            f"jacobian at 0 has rank {matrix_rank(jacobian, exact=exact)} < {p}",
            "not every generator is homogeneous"
            if not cone_ok
            else "homogeneous, but no invertible gradient block at u",
            "p > 1, not a hypersurface"
            if p != 1
            else "initial-form gradient vanishes at u",
            f"initial-form gradients at u have rank {matrix_rank(rows, exact=exact)} < {p}",
        )
        return Certificate(
            kind=CertClass.NONE,
            passing=(),
            initial_gradients=rows,
            failures=failures,
        )
    return Certificate(
        kind=passing[0],
        passing=passing,
        jacobian_at_zero=jacobian if smooth_ok else None,
        homogeneity_degrees=tuple(degrees) if cone_ok else None,
        initial_gradients=rows,
        block_columns=block,
    )


def verify_certificate(sys: PolySystem, u: Vector, cert: Certificate) -> bool:
    """Recompute the witnessed facts; False if any claim fails."""
    exact = sys.field.is_exact
    p = sys.p
    if cert.kind is CertClass.NONE:
        return classify(sys, u).kind is CertClass.NONE
    if cert.kind is CertClass.SMOOTH:
        origin = sys.zero_vector()
        jac = [tuple(g.evaluate(origin) for g in gen.gradient()) for gen in sys.generators]
        if matrix_rank(jac, exact=exact) != p:
            return False
    if cert.kind is CertClass.HOMOGENEOUS_CONE:
        if not all(g.is_homogeneous() for g in sys.generators):
            return False
    if cert.kind is CertClass.HYPERSURFACE_NONDEG:
        if p != 1:
            return False
        rows = _initial_gradient_rows(sys, u)
        if all(sys.is_zero(v) for v in rows[0]):
            return False
    if cert.kind is CertClass.CI_NONDEG:
        rows = _initial_gradient_rows(sys, u)
        if matrix_rank(rows, exact=exact) != p:
            return False
    if cert.block_columns is not None:
        rows = _initial_gradient_rows(sys, u)
        square = [[row[c] for c in cert.block_columns] for row in rows]
        if matrix_rank(square, exact=exact) != p:
            return False
    return True


@dataclass(frozen=True)
class ResidualReport:
    generator_index: int
    required_order: int
    first_nonzero: Optional[int]
    clean_through: int

    @property
    def clean(self) -> bool:
        return self.first_nonzero is None or self.first_nonzero > self.required_order


@dataclass(frozen=True)
class JetArc:
    """Truncated arc witnessing that w is a realizable second-order jet.

    ``series.coeffs[1] == u`` and ``series.coeffs[2] == w/2`` exactly; the
    residual orders record, per generator, the largest k such that
    f_i(gamma(t)) = 0 mod t^(k+1) among the computable coefficients.
    """

    series: TruncatedSeries
    u: Vector
    w: Vector
    residual_orders: tuple[int, ...]
    certificate: Certificate

    @property
    def order(self) -> int:
        return self.series.order

    def to_json(self) -> dict:
        return {
            "order": self.series.order,
            "coeffs": [vector_to_json(vec) for vec in self.series.coeffs],
            "residual_orders": list(self.residual_orders),
            "certificate": self.certificate.to_json(),
        }


def verify_arc(sys: PolySystem, series: TruncatedSeries) -> tuple[ResidualReport, ...]:
    """Independently recompute f_i(gamma(t)) and locate the first nonzero
    coefficient, per generator.

    Coefficients through order m_i + N - 1 are determined by the truncated
    arc; the report extends one order further to expose the truncation
    tail.
    """
    reports = []
    for idx, (gen, data) in enumerate(zip(sys.generators, initial_data(sys))):
        bound = data.order + series.order
        composed = compose_series(gen, series, order=bound).scalar_coeffs()
        first_nonzero = None
        for k, value in enumerate(composed):
            if not sys.is_zero(value):
                first_nonzero = k
                break
        clean_through = bound if first_nonzero is None else first_nonzero - 1
        reports.append(
            ResidualReport(
                generator_index=idx,
                required_order=data.order + series.order - 1,
                first_nonzero=first_nonzero,
                clean_through=clean_through,
            )
        )
    return tuple(reports)


def _base_series(sys: PolySystem, u: Vector, w: Vector, order: int) -> list[list[Scalar]]:
    zero = Fraction(0) if sys.field.is_exact else (complex(0.0) if sys.field.is_complex else 0.0)
    half = Fraction(1, 2) if sys.field.is_exact else 0.5
    coeffs = [[zero] * sys.n for _ in range(order + 1)]
    coeffs[1] = list(u)
    coeffs[2] = [half * x for x in w]
    return coeffs


def _freeze(coeffs: list[list[Scalar]], order: int, n: int) -> TruncatedSeries:
    return TruncatedSeries(n, order, tuple(tuple(row) for row in coeffs))


def lift_second_jet(
    sys: PolySystem,
    cert: Certificate,
    u: Vector,
    w: Vector,
    order: int = DEFAULT_TRUNCATION,
) -> JetArc:
    """Construct a truncated arc in X with second jet (u, w).

    The jet must satisfy the affine second-order system exactly (it is
    rejected otherwise: no arc can exist).  Homogeneous cones first try the
    direct parabola t*u + (1/2)t^2 w, which stays in the cone whenever no
    correction is needed; otherwise the generic order-by-order solve runs
    on the invertible witness block.
    """
    if cert.kind is CertClass.NONE:
        raise PreconditionError("lift_second_jet requires a certificate (class != NONE)")
    if order < 2:
        raise PreconditionError("truncation order must be at least 2")
    if len(w) != sys.n:
        raise PreconditionError(f"w has dimension {len(w)}, expected {sys.n}")
    if not tangent_cone_membership(sys, u):
        raise InadmissibleJetError("u is not on the tangent cone of the generators")
    rows, rhs = t2a_system(sys, u)
    if not satisfies(rows, rhs, w, exact=sys.field.is_exact):
        raise InadmissibleJetError(
            "w does not satisfy the second-order jet system; the jet is not admissible"
        )

    if cert.kind is CertClass.HOMOGENEOUS_CONE:
        direct = _freeze(_base_series(sys, u, w, order), order, sys.n)
        reports = verify_arc(sys, direct)
        if all(r.clean for r in reports):
            return JetArc(
                series=direct,
                u=tuple(u),
                w=tuple(w),
                residual_orders=tuple(r.clean_through for r in reports),
                certificate=cert,
            )
        if cert.block_columns is None:
            raise LiftError(
                "homogeneous cone is degenerate along u (no invertible gradient "
                "block); the direct arc leaves the cone and no correction is available"
            )

    if cert.block_columns is None:
        raise CertificateError("certificate carries no invertible column block")

    return _lift_with_block(sys, cert, u, w, order)


def _lift_with_block(
    sys: PolySystem, cert: Certificate, u: Vector, w: Vector, order: int
) -> JetArc:
    exact = sys.field.is_exact
    cols = cert.block_columns
    data = initial_data(sys)
    block = [
        [row[c] for c in cols]
        for row in _initial_gradient_rows(sys, u)
    ]
    coeffs = _base_series(sys, u, w, order)
    for k in range(1, order - 1):
        gamma = _freeze(coeffs, order, sys.n)
        residual = []
        for gen, d in zip(sys.generators, data):
            target = d.order + k + 1
            coeff_k = compose_series(gen, gamma, order=target).scalar_coeffs()[target]
            residual.append(-coeff_k)
        correction = solve_square(block, residual, exact=exact)
        if correction is None:
            raise CertificateError(
                "witness block became singular during lifting; certificate invalid"
            )
        for j, c in enumerate(cols):
            coeffs[k + 2][c] += correction[j]
    series = _freeze(coeffs, order, sys.n)
    reports = verify_arc(sys, series)
    if not all(r.clean for r in reports):
        raise CertificateError(
            "lift left a nonzero residual below the truncation bound; certificate invalid"
        )
    return JetArc(
        series=series,
        u=tuple(u),
        w=tuple(w),
        residual_orders=tuple(r.clean_through for r in reports),
        certificate=cert,
    )
