"""Exception types shared across the package."""

from __future__ import annotations


class JetconeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(JetconeError):
    """Polynomial text could not be parsed.

    ``position`` is the 1-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidSystemError(JetconeError):
    """A polynomial system violates its construction invariants."""


class PreconditionError(JetconeError):
    """An operation was called outside its stated precondition."""


class InadmissibleJetError(JetconeError):
    """The requested second-order jet does not satisfy the defining
    linear system, so no arc realizing it can exist."""


class CertificateError(JetconeError):
    """A certificate failed to re-verify during use (internal error)."""


class IllConditionedError(JetconeError):
    """A floating-point pivot fell below the conditioning threshold."""


class LiftError(JetconeError):
    """An arc could not be constructed for a jet that passed the
    admissibility check (degenerate generator-level input)."""


class ProblemError(JetconeError):
    """A problem file failed semantic validation."""
