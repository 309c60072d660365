"""Validation and conversion of problem files into domain objects.

The reference point is translated to the origin here: running with point q
on generators g is defined to equal running with point 0 on g(x + q), so
downstream modules only ever see germs at 0.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidSystemError, ParseError, ProblemError
from .fields import Field, coerce_vector, scalar_is_zero
from .lifting import DEFAULT_TRUNCATION
from .poly import Polynomial, parse_polynomial
from .sampler import DEFAULT_SCHEDULE, DecaySchedule
from .schemas import Problem
from .system import PolySystem, Vector


@dataclass(frozen=True)
class ProblemContext:
    problem: Problem
    system: PolySystem
    directions: tuple[Vector, ...]
    candidates_w: tuple[Vector, ...]
    objective: Optional[Polynomial]
    truncation: int
    schedule: DecaySchedule
    digest: str


def input_digest(problem: Problem) -> str:
    payload = json.dumps(
        problem.model_dump(exclude_none=True), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _parse_generator(text: str, index: int, n: int, field: Field) -> Polynomial:
    try:
        poly = parse_polynomial(text, n, field)
    except ParseError as exc:
        raise ProblemError(f"generator {index + 1} ({text!r}): {exc}") from exc
    if not poly:
        raise ProblemError(f"generator {index + 1} is the zero polynomial")
    return poly


def build_context(problem: Problem) -> ProblemContext:
    """Validate a problem file and translate it to a system at the origin."""
    field = Field(problem.field)
    n = problem.n

    generators = [
        _parse_generator(text, i, n, field)
        for i, text in enumerate(problem.generators)
    ]

    if problem.point is not None:
        point = coerce_vector(field, problem.point, n, what="point")
    else:
        point = None

    if point is not None and any(not scalar_is_zero(q, field.is_exact) for q in point):
        for i, gen in enumerate(generators):
            value = gen.evaluate(point)
            if not scalar_is_zero(value, field.is_exact):
                raise ProblemError(
                    f"generator {i + 1} does not vanish at the reference point "
                    f"(value {value})"
                )
        generators = [gen.shift(point) for gen in generators]

    try:
        system = PolySystem(n, field, tuple(generators))
    except InvalidSystemError as exc:
        raise ProblemError(str(exc)) from exc

    directions = tuple(
        coerce_vector(field, d, n, what=f"direction {i + 1}")
        for i, d in enumerate(problem.directions or [])
    )
    candidates = tuple(
        coerce_vector(field, w, n, what=f"candidate w {i + 1}")
        for i, w in enumerate(problem.candidates_w or [])
    )

    objective = None
    if problem.objective is not None:
        obj_vars = 2 * n if field.is_complex else n
        obj_field = Field.REAL if field.is_complex else field
        try:
            objective = parse_polynomial(problem.objective, obj_vars, obj_field)
        except ParseError as exc:
            raise ProblemError(f"objective ({problem.objective!r}): {exc}") from exc

    schedule = DEFAULT_SCHEDULE
    if problem.schedule is not None:
        overrides = {
            k: v for k, v in problem.schedule.model_dump().items() if v is not None
        }
        if "t_values" in overrides:
            overrides["t_values"] = tuple(overrides["t_values"])
        try:
            schedule = DecaySchedule(
                **{
                    "t_values": DEFAULT_SCHEDULE.t_values,
                    "project_tol": DEFAULT_SCHEDULE.project_tol,
                    "decay_exponent_threshold": DEFAULT_SCHEDULE.decay_exponent_threshold,
                    "reject_floor": DEFAULT_SCHEDULE.reject_floor,
                    **overrides,
                }
            )
        except ValueError as exc:
            raise ProblemError(f"invalid schedule: {exc}") from exc

    return ProblemContext(
        problem=problem,
        system=system,
        directions=directions,
        candidates_w=candidates,
        objective=objective,
        truncation=problem.truncation or DEFAULT_TRUNCATION,
        schedule=schedule,
        digest=input_digest(problem),
    )


def require_directions(ctx: ProblemContext) -> tuple[Vector, ...]:
    if not ctx.directions:
        raise ProblemError("this subcommand requires a nonempty 'directions' list")
    for i, u in enumerate(ctx.directions):
        if all(scalar_is_zero(x, ctx.system.field.is_exact) for x in u):
            raise ProblemError(f"direction {i + 1} is the zero vector")
    return ctx.directions


def require_candidates(ctx: ProblemContext) -> tuple[Vector, ...]:
    if not ctx.candidates_w:
        raise ProblemError("this subcommand requires a nonempty 'candidates_w' list")
    return ctx.candidates_w


def require_objective(ctx: ProblemContext) -> Polynomial:
    if ctx.objective is None:
        raise ProblemError("this subcommand requires an 'objective' polynomial")
    return ctx.objective
