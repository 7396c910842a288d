"""Exception hierarchy shared by all coshspec modules."""


class CoshSpecError(Exception):
    """Base class for every error raised by coshspec."""


class ValidationError(CoshSpecError, ValueError):
    """An input breaks a documented invariant."""


class ParseError(CoshSpecError, ValueError):
    """A configuration document could not be parsed."""


class CutPointError(ValidationError):
    """Spectral parameter lies on the essential spectrum [2, inf)."""


class SingularOmega(ValidationError):
    """sin(omega) vanishes, so the free resolvent is undefined."""


class ZeroDisplacement(ValidationError):
    """The two-term resolvent form was asked for a near-zero displacement."""


class DomainError(ValidationError):
    pass


class NotNonnegative(ValidationError):
    """Potential is complex or takes negative values."""


class NotARoot(ValidationError):
    """omega does not solve the delta-model condition."""


class TailTooFat(CoshSpecError, RuntimeError):
    """Kernel decays too slowly to truncate at an affordable length."""


class QuadratureDiverged(CoshSpecError, RuntimeError):
    pass


class NoConvergence(CoshSpecError, RuntimeError):
    pass


class CertificationFailed(CoshSpecError, RuntimeError):
    pass


class WindingMismatch(CoshSpecError, RuntimeError):
    """Argument-principle count disagrees with the roots found."""

    def __init__(self, message, expected=None, found=None):
        super().__init__(message)
        self.expected = expected
        self.found = found


class StepCollapse(CoshSpecError, RuntimeError):
    """Branch continuation could not proceed above the minimum step."""


class BoundViolation(CoshSpecError, RuntimeError):
    """A located eigenvalue violates |sin w / w| <= ||V||_1 / (2 pi b)."""

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = list(reports)
