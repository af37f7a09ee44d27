"""Exception hierarchy shared by all timeflow modules.

Two roots: ``ValidationError`` for rejected inputs (CLI exit code 1) and
``NumericsError`` for violated numerical contracts discovered during a
computation (CLI exit code 2).
"""


class ValidationError(ValueError):
    """Input rejected before any computation ran."""


class NumericsError(RuntimeError):
    """A numerical contract was violated during a computation."""


class BasisMismatchError(ValidationError):
    """Operands live on different bases."""


class NormalizationError(ValidationError):
    """State vector is not normalized to the required tolerance."""


class UnsupportedConfigurationError(ValidationError):
    """Requested configuration is outside what the construction supports."""


class MixedSupportError(ValidationError):
    """State straddles both halves of a doubled basis."""


class TruncationError(NumericsError):
    """Basis truncation too small for the requested state."""


class UndefinedPhaseError(NumericsError):
    """Phase expectation vanishes; no phase can be assigned."""


class BoundaryViolationError(NumericsError):
    """Wavepacket amplitude reached the edge of the spatial grid."""


class MomentumAliasingError(NumericsError):
    """Wavepacket momentum support does not fit the momentum grid."""
