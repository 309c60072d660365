"""Second-order necessary/sufficient optimality checks at the origin.

The directional second-order condition asks whether

    inf over w in T2  of  <u, H u> + <g, w>      (g = grad f(0), H = hess f(0))

is nonnegative (necessity) or strictly positive (sufficiency), where T2 is
the geometric second-order tangent set along a critical direction u.  Over
an affine set the infimum has a closed form: it is finite iff g is
orthogonal to the direction space, in which case every element gives the
same value; otherwise it is -infinity.  An empty set gives +infinity and
the condition holds vacuously.

Certified inputs use the exact affine set, which equals the geometric one.
Uncertified inputs only have the algebraic superset: a nonnegative infimum
over the superset still proves necessity (infima shrink on supersets), but
a negative one is inconclusive and is optionally corroborated by the
numerical sampler.

Objectives are real-valued.  Over the complex field the objective is a
polynomial in the 2n real-imaginary coordinates (real parts first, then
imaginary parts), directions and witnesses are handled in those doubled
coordinates, and comparisons use float tolerances instead of exact zero
tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import PreconditionError
from .fields import Scalar, scalar_is_zero, scalar_to_float, scalar_to_json, vector_to_json
from .lifting import CertClass, Certificate, classify
from .linalg import AffineSubspace, dot, satisfies
from .poly import Polynomial
from .sampler import DEFAULT_SCHEDULE, DecaySchedule, Verdict, t2_membership
from .system import PolySystem, Vector, algebraic_t2, t2a_system, tangent_cone_membership

#: Criticality threshold for float fields (exact fields compare to zero).
CRITICAL_TOL = 1e-10


class InfKind(str, enum.Enum):
    FINITE = "finite"
    NEG_INF = "neg_inf"
    EMPTY = "empty"


@dataclass(frozen=True)
class Infimum:
    kind: InfKind
    value: Optional[Scalar] = None

    def is_nonnegative(self) -> bool:
        if self.kind is InfKind.EMPTY:
            return True
        if self.kind is InfKind.NEG_INF:
            return False
        return self.value >= 0

    def is_positive(self) -> bool:
        if self.kind is InfKind.EMPTY:
            return True
        if self.kind is InfKind.NEG_INF:
            return False
        return self.value > 0

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is InfKind.FINITE:
            out["value"] = scalar_to_json(self.value)
        return out


class SetUsed(str, enum.Enum):
    ALGEBRAIC = "algebraic"
    GEOMETRIC_CERTIFIED = "geometric_certified"
    GEOMETRIC_SAMPLED = "geometric_sampled"


class OptVerdict(str, enum.Enum):
    NECESSARY_HOLDS = "NECESSARY_HOLDS"
    NECESSARY_FAILS = "NECESSARY_FAILS"
    SUFFICIENT_HOLDS = "SUFFICIENT_HOLDS"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class OptimalityReport:
    direction: Vector
    first_order_value: Scalar
    is_critical: bool
    quadratic_term: Scalar
    infimum: Infimum
    set_used: SetUsed
    verdict: OptVerdict
    certificate: Optional[Certificate] = None
    witness: Optional[Vector] = None
    margin: Optional[Scalar] = None
    evidence: str = "exact"
    sampled_infimum: Optional[float] = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "direction": vector_to_json(self.direction),
            "first_order": scalar_to_json(self.first_order_value),
            "is_critical": self.is_critical,
            "quadratic_term": scalar_to_json(self.quadratic_term),
            "infimum": self.infimum.to_json(),
            "set_used": self.set_used.value,
            "verdict": self.verdict.value,
            "evidence": self.evidence,
        }
        if self.witness is not None:
            out["witness"] = vector_to_json(self.witness)
        if self.margin is not None:
            out["margin"] = scalar_to_json(self.margin)
        if self.sampled_infimum is not None:
            out["sampled_infimum"] = self.sampled_infimum
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def gradient_at_zero(objective: Polynomial) -> Vector:
    origin = (Fraction(0),) * objective.n_vars
    return tuple(g.evaluate(origin) for g in objective.gradient())


def quadratic_term(objective: Polynomial, u: Sequence[Scalar]) -> Scalar:
    """<u, hess f(0) u>, evaluated exactly from the degree-2 part."""
    origin = (Fraction(0),) * objective.n_vars
    hess = objective.hessian_at(origin)
    total: Scalar = 0
    for i, row in enumerate(hess):
        for j, value in enumerate(row):
            if value != 0:
                total += u[i] * value * u[j]
    return total


def _is_critical(value: Scalar, exact: bool) -> bool:
    return scalar_is_zero(value, exact, tol=CRITICAL_TOL)


def _realify_vector(u: Sequence[Scalar]) -> tuple[float, ...]:
    zs = [complex(scalar_to_float(x)) for x in u]
    return tuple([z.real for z in zs] + [z.imag for z in zs])


def _realify_subspace(subspace: AffineSubspace) -> AffineSubspace:
    """Embed a complex affine subspace of C^n into R^{2n}: each complex
    basis vector b contributes the real directions b and i*b."""
    if subspace.is_empty:
        return AffineSubspace.empty(2 * subspace.ambient_dim)
    point = _realify_vector(subspace.point)
    basis = []
    for b in subspace.basis:
        basis.append(_realify_vector(b))
        basis.append(_realify_vector(tuple(1j * complex(scalar_to_float(x)) for x in b)))
    return AffineSubspace(2 * subspace.ambient_dim, point, tuple(basis))


@dataclass(frozen=True)
class _Frame:
    """Objective-side geometry in the coordinates the objective lives in."""

    gradient: Vector
    u_eff: Vector
    quad: Scalar
    exact: bool
    subspace_fn: Callable[[], AffineSubspace]


def _frame(sys: PolySystem, objective: Polynomial, u: Vector) -> _Frame:
    if sys.field.is_complex:
        if objective.n_vars != 2 * sys.n:
            raise PreconditionError(
                "over the complex field the objective must be a polynomial in "
                f"the {2 * sys.n} real-imaginary coordinates"
            )
        u_eff = _realify_vector(u)
        g = tuple(float(v) for v in gradient_at_zero(objective))
        return _Frame(
            gradient=g,
            u_eff=u_eff,
            quad=float(quadratic_term(objective, u_eff)),
            exact=False,
            subspace_fn=lambda: _realify_subspace(algebraic_t2(sys, u)),
        )
    if objective.n_vars != sys.n:
        raise PreconditionError(
            f"objective has {objective.n_vars} variables, the system has {sys.n}"
        )
    g = tuple(sys.coerce(v) for v in gradient_at_zero(objective))
    return _Frame(
        gradient=g,
        u_eff=tuple(u),
        quad=sys.coerce(quadratic_term(objective, u)),
        exact=sys.field.is_exact,
        subspace_fn=lambda: algebraic_t2(sys, u),
    )


def first_order_scan(
    sys: PolySystem, objective: Polynomial, directions: Sequence[Vector]
) -> tuple[tuple[Scalar, bool], ...]:
    """Per direction: <grad f(0), u> and whether u is critical."""
    out = []
    for u in directions:
        frame = _frame(sys, objective, u)
        value = dot(frame.gradient, frame.u_eff)
        if frame.exact:
            value = sys.coerce(value)
        out.append((value, _is_critical(value, frame.exact)))
    return tuple(out)


def affine_infimum(
    g: Vector, c: Scalar, subspace: AffineSubspace, tol: float = 0.0
) -> Infimum:
    """Closed-form infimum of c + <g, w> over an affine subspace."""
    if subspace.is_empty:
        return Infimum(InfKind.EMPTY)
    for vec in subspace.basis:
        if abs(dot(g, vec)) > tol:
            return Infimum(InfKind.NEG_INF)
    return Infimum(InfKind.FINITE, c + dot(g, subspace.point))


def _descent_witness(
    g: Vector, c: Scalar, subspace: AffineSubspace, tol: float = 0.0
) -> Vector:
    """A concrete w in the subspace with c + <g, w> < 0 (requires the
    infimum to be negative or -infinity)."""
    base_value = c + dot(g, subspace.point)
    if base_value < 0:
        return subspace.point
    for i, vec in enumerate(subspace.basis):
        slope = dot(g, vec)
        if abs(slope) > tol:
            # step far enough past the zero level to make the value <= -1
            needed = (base_value + 1) / abs(slope)
            sign = -1 if slope > 0 else 1
            weights = [0] * len(subspace.basis)
            weights[i] = sign * needed
            return subspace.element(weights)
    raise ValueError("infimum is nonnegative; no descent witness exists")


def necessary_check(
    sys: PolySystem,
    objective: Polynomial,
    u: Vector,
    *,
    schedule: DecaySchedule = DEFAULT_SCHEDULE,
    seed: int = 0,
    corroborate: bool = True,
) -> OptimalityReport:
    """Directional second-order necessary condition at a critical u.

    With a certificate the affine set equals the geometric one and the
    verdict is exact either way.  Without one, a nonnegative infimum over
    the algebraic superset still settles necessity; a negative one is
    flagged inconclusive and, when ``corroborate`` is set, probed with the
    numerical sampler.
    """
    if not tangent_cone_membership(sys, u):
        raise PreconditionError("necessary_check requires u in the tangent cone")
    frame = _frame(sys, objective, u)
    first_order = dot(frame.gradient, frame.u_eff)
    if not _is_critical(first_order, frame.exact):
        raise PreconditionError(
            "necessary_check requires a critical direction (<grad f(0), u> = 0)"
        )
    tol = 0.0 if frame.exact else CRITICAL_TOL
    cert = classify(sys, u)
    subspace = frame.subspace_fn()
    infimum = affine_infimum(frame.gradient, frame.quad, subspace, tol)
    base = dict(
        direction=tuple(u),
        first_order_value=first_order,
        is_critical=True,
        quadratic_term=frame.quad,
        infimum=infimum,
        certificate=cert,
    )

    if cert.kind is not CertClass.NONE:
        if infimum.is_nonnegative():
            return OptimalityReport(
                **base, set_used=SetUsed.GEOMETRIC_CERTIFIED,
                verdict=OptVerdict.NECESSARY_HOLDS,
            )
        return OptimalityReport(
            **base,
            set_used=SetUsed.GEOMETRIC_CERTIFIED,
            verdict=OptVerdict.NECESSARY_FAILS,
            witness=_descent_witness(frame.gradient, frame.quad, subspace, tol),
        )

    notes = [
        "class NONE: infimum computed over the algebraic set, a superset of "
        "the geometric one"
    ]
    if infimum.is_nonnegative():
        notes.append("nonnegative over the superset, so the geometric condition holds")
        return OptimalityReport(
            **base,
            set_used=SetUsed.ALGEBRAIC,
            verdict=OptVerdict.NECESSARY_HOLDS,
            notes=tuple(notes),
        )
    notes.append(
        "negative algebraic infimum is inconclusive for necessity: the "
        "geometric set may be smaller"
    )
    if not corroborate:
        return OptimalityReport(
            **base,
            set_used=SetUsed.ALGEBRAIC,
            verdict=OptVerdict.INDETERMINATE,
            notes=tuple(notes),
        )
    return _sampled_necessity(
        sys, u, frame, subspace, base, tuple(notes), schedule, seed, tol
    )


def _candidate_ws(g: Vector, subspace: AffineSubspace, tol: float) -> list[Vector]:
    candidates: list[Vector] = [subspace.point]
    k = len(subspace.basis)
    for i, vec in enumerate(subspace.basis):
        for sign in (1, -1):
            weights = [0] * k
            weights[i] = sign
            candidates.append(subspace.element(weights))
        slope = dot(g, vec)
        if abs(slope) > tol:
            sign = -1 if slope > 0 else 1
            for scale in (2, 4, 8):
                weights = [0] * k
                weights[i] = sign * scale
                candidates.append(subspace.element(weights))
    seen = set()
    unique = []
    for w in candidates:
        key = tuple(complex(scalar_to_float(x)) for x in w)
        if key not in seen:
            seen.add(key)
            unique.append(w)
    return unique


def _collapse_complex(sys: PolySystem, w_eff: Vector) -> Vector:
    """Map a doubled-real vector back into C^n for the sampler."""
    n = sys.n
    return tuple(complex(w_eff[i], w_eff[n + i]) for i in range(n))


def _sampled_necessity(
    sys: PolySystem,
    u: Vector,
    frame: _Frame,
    subspace: AffineSubspace,
    base: dict,
    notes: tuple[str, ...],
    schedule: DecaySchedule,
    seed: int,
    tol: float,
) -> OptimalityReport:
    float_sys = sys.to_float()
    if sys.field.is_complex:
        u_probe = tuple(complex(scalar_to_float(x)) for x in u)
    else:
        u_probe = tuple(float(scalar_to_float(x)) for x in u)
    member_values: list[float] = []
    fail_witness: Optional[Vector] = None
    for w in _candidate_ws(frame.gradient, subspace, tol):
        if sys.field.is_complex:
            w_probe = _collapse_complex(sys, w)
        else:
            w_probe = tuple(float(scalar_to_float(x)) for x in w)
        verdict = t2_membership(float_sys, u_probe, w_probe, schedule, seed=seed)
        value = frame.quad + dot(frame.gradient, w)
        value_f = float(scalar_to_float(value))
        if verdict.verdict is Verdict.MEMBER:
            member_values.append(value_f)
            if value_f < -CRITICAL_TOL and fail_witness is None:
                fail_witness = w
    if fail_witness is not None:
        return OptimalityReport(
            **base,
            set_used=SetUsed.GEOMETRIC_SAMPLED,
            verdict=OptVerdict.NECESSARY_FAILS,
            witness=fail_witness,
            evidence="numerical",
            sampled_infimum=min(member_values),
            notes=notes + ("sampler found a member with negative value",),
        )
    if member_values:
        return OptimalityReport(
            **base,
            set_used=SetUsed.GEOMETRIC_SAMPLED,
            verdict=OptVerdict.NECESSARY_HOLDS,
            evidence="numerical",
            sampled_infimum=min(member_values),
            notes=notes
            + (
                "all sampled members have nonnegative value; descent directions "
                "of the algebraic set leave the geometric set",
            ),
        )
    return OptimalityReport(
        **base,
        set_used=SetUsed.GEOMETRIC_SAMPLED,
        verdict=OptVerdict.INDETERMINATE,
        evidence="numerical",
        notes=notes + ("sampling did not settle the direction",),
    )


def sufficient_check(
    sys: PolySystem,
    objective: Polynomial,
    u: Vector,
    parabolic_regularity_asserted: bool = False,
) -> OptimalityReport:
    """Directional second-order sufficiency at a critical u.

    A strictly positive directional infimum certifies the condition only
    when the geometric set is under control: either the direction carries a
    surjectivity certificate, or the caller explicitly asserts parabolic
    regularity (in which case positivity over the algebraic superset is
    still sound, since infima only grow on subsets).
    """
    frame = _frame(sys, objective, u)
    first_order = dot(frame.gradient, frame.u_eff)
    if not _is_critical(first_order, frame.exact):
        raise PreconditionError(
            "sufficient_check requires a critical direction (<grad f(0), u> = 0)"
        )
    tol = 0.0 if frame.exact else CRITICAL_TOL
    if not tangent_cone_membership(sys, u):
        return OptimalityReport(
            direction=tuple(u),
            first_order_value=first_order,
            is_critical=True,
            quadratic_term=frame.quad,
            infimum=Infimum(InfKind.EMPTY),
            set_used=SetUsed.GEOMETRIC_CERTIFIED,
            verdict=OptVerdict.SUFFICIENT_HOLDS,
            notes=(
                "direction is outside the tangent cone of the generators, so the "
                "geometric second-order set is empty and the condition is vacuous",
            ),
        )
    cert = classify(sys, u)
    subspace = frame.subspace_fn()
    infimum = affine_infimum(frame.gradient, frame.quad, subspace, tol)
    gated = cert.kind is not CertClass.NONE or parabolic_regularity_asserted
    set_used = (
        SetUsed.GEOMETRIC_CERTIFIED
        if cert.kind is not CertClass.NONE
        else SetUsed.ALGEBRAIC
    )
    base = dict(
        direction=tuple(u),
        first_order_value=first_order,
        is_critical=True,
        quadratic_term=frame.quad,
        infimum=infimum,
        certificate=cert,
        set_used=set_used,
    )
    notes: list[str] = []
    if cert.kind is CertClass.NONE and parabolic_regularity_asserted:
        notes.append(
            "parabolic regularity asserted by the user; positivity over the "
            "algebraic superset implies the geometric condition"
        )
    if not gated:
        return OptimalityReport(
            **base,
            verdict=OptVerdict.INDETERMINATE,
            notes=(
                "class NONE and parabolic regularity not asserted: sufficiency "
                "cannot be gated",
            ),
        )
    if infimum.is_positive():
        margin = infimum.value if infimum.kind is InfKind.FINITE else None
        if infimum.kind is InfKind.EMPTY:
            notes.append("second-order set is empty; condition holds vacuously")
        return OptimalityReport(
            **base,
            verdict=OptVerdict.SUFFICIENT_HOLDS,
            margin=margin,
            notes=tuple(notes),
        )
    if cert.kind is not CertClass.NONE and not infimum.is_nonnegative():
        return OptimalityReport(
            **base,
            verdict=OptVerdict.NECESSARY_FAILS,
            witness=_descent_witness(frame.gradient, frame.quad, subspace, tol),
            notes=("negative certified infimum: the necessary condition fails",),
        )
    verdict = (
        OptVerdict.NECESSARY_HOLDS
        if cert.kind is not CertClass.NONE and infimum.is_nonnegative()
        else OptVerdict.INDETERMINATE
    )
    notes.append("directional infimum is not strictly positive")
    return OptimalityReport(**base, verdict=verdict, notes=tuple(notes))


def witness_is_valid(
    sys: PolySystem, u: Vector, report: OptimalityReport, objective: Polynomial
) -> bool:
    """Re-verify a NECESSARY_FAILS witness: negative value and membership in
    the affine system (real fields only)."""
    if report.witness is None or sys.field.is_complex:
        return False
    frame = _frame(sys, objective, u)
    value = frame.quad + dot(frame.gradient, report.witness)
    if not value < 0:
        return False
    rows, rhs = t2a_system(sys, u)
    return satisfies(rows, rhs, report.witness, exact=sys.field.is_exact)
