"""Directional second-order tangent sets of polynomial varieties.

Core pipeline: parse a polynomial system, compute initial forms and the
exact affine description of the directional second-order tangent set,
certify the direction into one of four surjectivity classes, lift
prescribed jets to explicit truncated arcs (or fall back to a numerical
membership sampler), and evaluate second-order optimality conditions.
"""

from .errors import (
    CertificateError,
    IllConditionedError,
    InadmissibleJetError,
    InvalidSystemError,
    JetconeError,
    LiftError,
    ParseError,
    PreconditionError,
    ProblemError,
)
from .fields import Field, Scalar
from .lifting import (
    DEFAULT_TRUNCATION,
    CertClass,
    Certificate,
    JetArc,
    classify,
    lift_second_jet,
    verify_arc,
    verify_certificate,
)
from .linalg import AffineSubspace
from .optimality import (
    InfKind,
    Infimum,
    OptimalityReport,
    OptVerdict,
    SetUsed,
    affine_infimum,
    first_order_scan,
    necessary_check,
    sufficient_check,
)
from .poly import Polynomial, parse_polynomial
from .sampler import (
    DEFAULT_SCHEDULE,
    DecaySchedule,
    MembershipVerdict,
    Verdict,
    project_to_variety,
    t2_case_sweep,
    t2_membership,
)
from .series import TruncatedSeries, compose_series
from .system import (
    GENERATOR_SEMANTICS,
    InitialData,
    PolySystem,
    algebraic_t2,
    initial_data,
    jet_space_t2,
    next_form_consistency,
    tangent_cone_membership,
)

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace",
    "CertClass",
    "Certificate",
    "CertificateError",
    "DecaySchedule",
    "DEFAULT_SCHEDULE",
    "DEFAULT_TRUNCATION",
    "Field",
    "GENERATOR_SEMANTICS",
    "IllConditionedError",
    "InadmissibleJetError",
    "InfKind",
    "Infimum",
    "InitialData",
    "InvalidSystemError",
    "JetArc",
    "JetconeError",
    "LiftError",
    "MembershipVerdict",
    "OptVerdict",
    "OptimalityReport",
    "ParseError",
    "PolySystem",
    "Polynomial",
    "PreconditionError",
    "ProblemError",
    "Scalar",
    "SetUsed",
    "TruncatedSeries",
    "Verdict",
    "affine_infimum",
    "algebraic_t2",
    "classify",
    "compose_series",
    "first_order_scan",
    "initial_data",
    "jet_space_t2",
    "lift_second_jet",
    "necessary_check",
    "next_form_consistency",
    "parse_polynomial",
    "project_to_variety",
    "sufficient_check",
    "t2_case_sweep",
    "t2_membership",
    "tangent_cone_membership",
    "verify_arc",
    "verify_certificate",
    "__version__",
]
