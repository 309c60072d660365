"""Subcommand implementations shared by the HTTP service and the CLI.

Each function takes a validated problem plus a seed and returns a typed
report.  Per-item failures (a direction outside the cone, an inadmissible
jet) are recorded inside the report entries; only file-level validation
raises.  Under the rational field identical inputs produce identical
reports, wall time aside.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import InadmissibleJetError, JetconeError, LiftError, ProblemError
from .fields import Field, vector_to_json
from .lifting import CertClass, classify, lift_second_jet
from .optimality import (
    OptVerdict,
    necessary_check,
    first_order_scan,
    sufficient_check,
)
from .poly import format_polynomial
from .problem import (
    ProblemContext,
    build_context,
    require_candidates,
    require_directions,
    require_objective,
)
from .sampler import Verdict, t2_case_sweep, t2_membership
from .schemas import (
    AnalysisRequest,
    ArcModel,
    CertificateModel,
    ClassifyEntry,
    ClassifyReport,
    InfimumModel,
    InitialFormEntry,
    InitialReport,
    LiftEntry,
    LiftReport,
    OptimalityEntry,
    OptimalityRunReport,
    ReportMeta,
    SampleEntry,
    SampleReport,
    SubspaceModel,
    SweepEntry,
    SweepReport,
    SweepVerdictRow,
    T2aEntry,
    T2aReport,
    TangentConeEntry,
    TangentConeReport,
    VerdictModel,
)
from .system import (
    GENERATOR_SEMANTICS,
    algebraic_t2,
    initial_data,
    next_form_consistency,
    tangent_cone_membership,
)


def _meta(ctx: ProblemContext, started: float) -> ReportMeta:
    return ReportMeta(
        tool_version=__version__,
        input_digest=ctx.digest,
        wall_time_s=time.perf_counter() - started,
        semantics=GENERATOR_SEMANTICS,
    )


def _context(request: AnalysisRequest) -> ProblemContext:
    return build_context(request.problem)


def cmd_initial(request: AnalysisRequest) -> InitialReport:
    started = time.perf_counter()
    ctx = _context(request)
    entries = [
        InitialFormEntry(
            generator=format_polynomial(gen),
            order=data.order,
            initial_form=format_polynomial(data.initial_form),
            next_form=format_polynomial(data.next_form),
        )
        for gen, data in zip(ctx.system.generators, initial_data(ctx.system))
    ]
    return InitialReport(meta=_meta(ctx, started), entries=entries)


def cmd_tangent_cone(request: AnalysisRequest) -> TangentConeReport:
    started = time.perf_counter()
    ctx = _context(request)
    entries = []
    for u in require_directions(ctx):
        in_cone = tangent_cone_membership(ctx.system, u)
        consistent = next_form_consistency(ctx.system, u) if in_cone else None
        entries.append(
            TangentConeEntry(
                direction=vector_to_json(u),
                in_tangent_cone=in_cone,
                next_form_consistent=consistent,
            )
        )
    return TangentConeReport(meta=_meta(ctx, started), entries=entries)


def cmd_t2a(request: AnalysisRequest) -> T2aReport:
    started = time.perf_counter()
    ctx = _context(request)
    entries = []
    for u in require_directions(ctx):
        in_cone = tangent_cone_membership(ctx.system, u)
        warning = None
        if not in_cone:
            warning = (
                "direction is not on the tangent cone of the generators; the "
                "geometric second-order set is empty and this affine set is formal"
            )
        subspace = algebraic_t2(ctx.system, u)
        entries.append(
            T2aEntry(
                direction=vector_to_json(u),
                in_tangent_cone=in_cone,
                warning=warning,
                t2a=SubspaceModel(**subspace.to_json()),
            )
        )
    return T2aReport(meta=_meta(ctx, started), entries=entries)


def cmd_classify(request: AnalysisRequest) -> ClassifyReport:
    started = time.perf_counter()
    ctx = _context(request)
    entries = []
    for u in require_directions(ctx):
        if not tangent_cone_membership(ctx.system, u):
            raise ProblemError(
                "classify requires every direction on the tangent cone; "
                f"direction {vector_to_json(u)} is not"
            )
        cert = classify(ctx.system, u)
        entries.append(
            ClassifyEntry(
                direction=vector_to_json(u),
                certificate=CertificateModel(**cert.to_json()),
            )
        )
    return ClassifyReport(meta=_meta(ctx, started), entries=entries)


def _lift_one(ctx: ProblemContext, u, w, seed: int) -> LiftEntry:
    sysm = ctx.system
    if not tangent_cone_membership(sysm, u):
        return LiftEntry(
            direction=vector_to_json(u),
            w=vector_to_json(w),
            status="error",
            note="direction is not on the tangent cone of the generators",
        )
    cert = classify(sysm, u)
    if cert.kind is CertClass.NONE:
        verdict = _sample_one(ctx, u, w, seed)
        return LiftEntry(
            direction=vector_to_json(u),
            w=vector_to_json(w),
            status="routed_to_sample",
            sample=verdict,
            note=(
                "no surjectivity certificate applies; falling back to the "
                "numerical membership oracle"
            ),
        )
    try:
        arc = lift_second_jet(sysm, cert, u, w, order=ctx.truncation)
    except InadmissibleJetError as exc:
        return LiftEntry(
            direction=vector_to_json(u),
            w=vector_to_json(w),
            status="rejected_inadmissible",
            note=str(exc),
        )
    except (LiftError, JetconeError) as exc:
        return LiftEntry(
            direction=vector_to_json(u),
            w=vector_to_json(w),
            status="error",
            note=str(exc),
        )
    return LiftEntry(
        direction=vector_to_json(u),
        w=vector_to_json(w),
        status="lifted",
        arc=ArcModel(**arc.to_json()),
    )


def cmd_lift(request: AnalysisRequest) -> LiftReport:
    started = time.perf_counter()
    ctx = _context(request)
    directions = require_directions(ctx)
    candidates = require_candidates(ctx)
    entries = [
        _lift_one(ctx, u, w, request.seed) for u in directions for w in candidates
    ]
    return LiftReport(meta=_meta(ctx, started), entries=entries)


def _float_vector(vec):
    return tuple(float(x) if isinstance(x, Fraction) else x for x in vec)


def _sample_one(ctx: ProblemContext, u, w, seed: int) -> VerdictModel:
    float_sys = ctx.system.to_float()
    verdict = t2_membership(
        float_sys, _float_vector(u), _float_vector(w), ctx.schedule, seed=seed
    )
    return VerdictModel(**verdict.to_json())


def cmd_sample(request: AnalysisRequest) -> SampleReport:
    started = time.perf_counter()
    ctx = _context(request)
    directions = require_directions(ctx)
    candidates = require_candidates(ctx)
    entries = []
    for u in directions:
        exact_route = None
        if ctx.system.field.is_exact and tangent_cone_membership(ctx.system, u):
            exact_route = classify(ctx.system, u)
        for w in candidates:
            arc_model = None
            if exact_route is not None and exact_route.kind is not CertClass.NONE:
                try:
                    arc = lift_second_jet(
                        ctx.system, exact_route, u, w, order=ctx.truncation
                    )
                    result = VerdictModel(
                        verdict="MEMBER",
                        evidence="exact witness (lifted arc)",
                        normalized_distances=[],
                        fitted_exponent=None,
                        diagnostics=[],
                    )
                    arc_model = ArcModel(**arc.to_json())
                except InadmissibleJetError:
                    result = VerdictModel(
                        verdict="NOT_MEMBER",
                        evidence=(
                            "exact: w violates the algebraic second-order system, "
                            "which contains the geometric set"
                        ),
                        normalized_distances=[],
                        fitted_exponent=None,
                        diagnostics=[],
                    )
                except (LiftError, JetconeError):
                    result = _sample_one(ctx, u, w, request.seed)
            else:
                result = _sample_one(ctx, u, w, request.seed)
            entries.append(
                SampleEntry(
                    direction=vector_to_json(u),
                    w=vector_to_json(w),
                    result=result,
                    arc=arc_model,
                )
            )
    return SampleReport(
        meta=_meta(ctx, started), schedule=ctx.schedule.to_json(), entries=entries
    )


def cmd_sweep(request: AnalysisRequest) -> SweepReport:
    started = time.perf_counter()
    ctx = _context(request)
    directions = require_directions(ctx)
    candidates = require_candidates(ctx)
    float_sys = ctx.system.to_float()
    entries = []
    for u in directions:
        result = t2_case_sweep(
            float_sys,
            _float_vector(u),
            [_float_vector(w) for w in candidates],
            ctx.schedule,
            seed=request.seed,
        )
        table = [
            SweepVerdictRow(
                w=vector_to_json(w),
                verdict=verdict.verdict.value,
                fitted_exponent=verdict.fitted_exponent,
            )
            for w, verdict in result.entries
        ]
        entries.append(
            SweepEntry(
                direction=vector_to_json(u),
                table=table,
                sign_constraints=list(result.sign_constraints),
            )
        )
    return SweepReport(
        meta=_meta(ctx, started), schedule=ctx.schedule.to_json(), entries=entries
    )


_AGGREGATE_NOTE = (
    "per-direction report: full second-order sufficiency needs every critical "
    "direction of the tangent cone covered; this tool checks the directions "
    "supplied and does not enumerate the cone"
)


def _optimality_entry(ctx: ProblemContext, u, seed: int) -> OptimalityEntry:
    sysm = ctx.system
    objective = ctx.objective
    in_cone = tangent_cone_membership(sysm, u)
    (first_order, critical), = first_order_scan(sysm, objective, [u])
    base = dict(
        direction=vector_to_json(u),
        first_order=_scalar_json(first_order),
        is_critical=critical,
    )
    if not in_cone:
        verdict = (
            OptVerdict.NECESSARY_HOLDS if not critical else OptVerdict.INDETERMINATE
        )
        return OptimalityEntry(
            **base,
            verdict=verdict.value,
            notes=[
                "direction is not on the tangent cone of the generators; "
                "directional conditions are vacuous for it"
            ],
        )
    if not critical:
        if first_order < 0:
            return OptimalityEntry(
                **base,
                verdict=OptVerdict.NECESSARY_FAILS.value,
                evidence="exact",
                notes=[
                    "first-order necessary condition fails: <grad f(0), u> < 0 "
                    "on a tangent direction"
                ],
            )
        return OptimalityEntry(
            **base,
            verdict=OptVerdict.NECESSARY_HOLDS.value,
            evidence="exact",
            notes=[
                "direction is not critical; the second-order condition is vacuous"
            ],
        )
    necessary = necessary_check(
        sysm, objective, u, schedule=ctx.schedule, seed=seed
    )
    if necessary.verdict is OptVerdict.NECESSARY_FAILS:
        chosen = necessary
    else:
        sufficient = sufficient_check(
            sysm, objective, u, ctx.problem.assert_parabolic_regularity
        )
        if sufficient.verdict is OptVerdict.SUFFICIENT_HOLDS:
            chosen = sufficient
        elif necessary.verdict is OptVerdict.NECESSARY_HOLDS:
            chosen = necessary
        else:
            chosen = sufficient if sufficient.verdict is OptVerdict.NECESSARY_FAILS else necessary
    payload = chosen.to_json()
    payload.pop("direction", None)
    payload.pop("first_order", None)
    payload.pop("is_critical", None)
    cert = payload.pop("certificate", None)
    return OptimalityEntry(
        **base,
        quadratic_term=payload.pop("quadratic_term"),
        infimum=InfimumModel(**payload.pop("infimum")),
        set_used=payload.pop("set_used"),
        verdict=payload.pop("verdict"),
        evidence=payload.pop("evidence"),
        witness=payload.pop("witness", None),
        margin=payload.pop("margin", None),
        sampled_infimum=payload.pop("sampled_infimum", None),
        certificate=CertificateModel(**cert) if cert else None,
        notes=payload.pop("notes", []),
    )


def _scalar_json(value):
    from .fields import scalar_to_json

    return scalar_to_json(value)


def cmd_optimality(request: AnalysisRequest) -> OptimalityRunReport:
    started = time.perf_counter()
    ctx = _context(request)
    directions = require_directions(ctx)
    require_objective(ctx)
    entries = [_optimality_entry(ctx, u, request.seed) for u in directions]
    return OptimalityRunReport(
        meta=_meta(ctx, started), aggregate_note=_AGGREGATE_NOTE, entries=entries
    )


COMMANDS = {
    "initial": cmd_initial,
    "tangent-cone": cmd_tangent_cone,
    "t2a": cmd_t2a,
    "classify": cmd_classify,
    "lift": cmd_lift,
    "sample": cmd_sample,
    "optimality": cmd_optimality,
    "sweep": cmd_sweep,
}
