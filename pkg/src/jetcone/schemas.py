"""Pydantic request/response models for the service and CLI.

The problem file is the single wire format: every endpoint and subcommand
takes ``{"problem": {...}, "seed": n}`` and returns a report whose ``meta``
block carries the tool version, an input digest, and the wall time.
Unknown keys are rejected everywhere (``extra="forbid"``) so that a typo in
a problem file fails loudly instead of being ignored.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field as PydField

Coord = Union[int, float, str, list[float]]


class ScheduleOverrides(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_values: Optional[list[float]] = None
    project_tol: Optional[float] = PydField(None, gt=0)
    decay_exponent_threshold: Optional[float] = None
    reject_floor: Optional[float] = PydField(None, gt=0)


class Problem(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = PydField(gt=0)
    field: Literal["rational", "real", "complex"]
    generators: list[str] = PydField(min_length=1)
    point: Optional[list[Coord]] = None
    directions: Optional[list[list[Coord]]] = None
    candidates_w: Optional[list[list[Coord]]] = None
    objective: Optional[str] = None
    truncation: Optional[int] = PydField(None, ge=2)
    schedule: Optional[ScheduleOverrides] = None
    assert_parabolic_regularity: bool = False


class AnalysisRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: Problem
    seed: int = 0


class ReportMeta(BaseModel):
    tool_version: str
    input_digest: str
    wall_time_s: float
    semantics: str


JsonScalar = Union[str, float, list[float]]
JsonVector = list[JsonScalar]


class InitialFormEntry(BaseModel):
    generator: str
    order: int
    initial_form: str
    next_form: str


class InitialReport(BaseModel):
    meta: ReportMeta
    entries: list[InitialFormEntry]


class TangentConeEntry(BaseModel):
    direction: JsonVector
    in_tangent_cone: bool
    next_form_consistent: Optional[bool] = None


class TangentConeReport(BaseModel):
    meta: ReportMeta
    entries: list[TangentConeEntry]


class SubspaceModel(BaseModel):
    kind: Literal["empty", "nonempty"]
    point: Optional[JsonVector] = None
    basis: Optional[list[JsonVector]] = None


class T2aEntry(BaseModel):
    direction: JsonVector
    in_tangent_cone: bool
    warning: Optional[str] = None
    t2a: SubspaceModel


class T2aReport(BaseModel):
    meta: ReportMeta
    entries: list[T2aEntry]


class CertificateModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    cert_class: str = PydField(alias="class")
    witness: dict
    passing: list[str]
    failures: Optional[list[str]] = None


class ClassifyEntry(BaseModel):
    direction: JsonVector
    certificate: CertificateModel


class ClassifyReport(BaseModel):
    meta: ReportMeta
    entries: list[ClassifyEntry]


class ArcModel(BaseModel):
    order: int
    coeffs: list[JsonVector]
    residual_orders: list[int]
    certificate: CertificateModel


class VerdictModel(BaseModel):
    verdict: Literal["MEMBER", "NOT_MEMBER", "INCONCLUSIVE"]
    evidence: str
    normalized_distances: list[list[float]]
    fitted_exponent: Optional[float] = None
    diagnostics: list[str] = []


class LiftEntry(BaseModel):
    direction: JsonVector
    w: JsonVector
    status: Literal["lifted", "rejected_inadmissible", "routed_to_sample", "error"]
    arc: Optional[ArcModel] = None
    sample: Optional[VerdictModel] = None
    note: Optional[str] = None


class LiftReport(BaseModel):
    meta: ReportMeta
    entries: list[LiftEntry]


class SampleEntry(BaseModel):
    direction: JsonVector
    w: JsonVector
    result: VerdictModel
    arc: Optional[ArcModel] = None


class SampleReport(BaseModel):
    meta: ReportMeta
    schedule: dict
    entries: list[SampleEntry]


class InfimumModel(BaseModel):
    kind: Literal["finite", "neg_inf", "empty"]
    value: Optional[JsonScalar] = None


class OptimalityEntry(BaseModel):
    direction: JsonVector
    first_order: JsonScalar
    is_critical: bool
    quadratic_term: Optional[JsonScalar] = None
    infimum: Optional[InfimumModel] = None
    set_used: Optional[str] = None
    verdict: str
    evidence: Optional[str] = None
    witness: Optional[JsonVector] = None
    margin: Optional[JsonScalar] = None
    sampled_infimum: Optional[float] = None
    certificate: Optional[CertificateModel] = None
    notes: list[str] = []


class OptimalityRunReport(BaseModel):
    meta: ReportMeta
    aggregate_note: str
    entries: list[OptimalityEntry]


class SweepVerdictRow(BaseModel):
    w: JsonVector
    verdict: Literal["MEMBER", "NOT_MEMBER", "INCONCLUSIVE"]
    fitted_exponent: Optional[float] = None


class SweepEntry(BaseModel):
    direction: JsonVector
    table: list[SweepVerdictRow]
    sign_constraints: list[str]


class SweepReport(BaseModel):
    meta: ReportMeta
    schedule: dict
    entries: list[SweepEntry]


class ErrorBody(BaseModel):
    error: str
    detail: str


class HealthResponse(BaseModel):
    status: str
    version: str
