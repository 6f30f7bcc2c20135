"""Exception hierarchy shared by every module."""


class PPTMeansError(Exception):
    """Base class for all library errors."""


class InvalidInput(PPTMeansError, ValueError):
    """Malformed, non-finite or mis-shaped input."""


class SingularMatrix(PPTMeansError, ValueError):
    """A positive definite argument was required but the matrix is singular."""


class PreconditionViolated(PPTMeansError, ValueError):
    """Input is well formed but fails a mathematical hypothesis (PSD, PPT, ...)."""


class UnknownCheck(PPTMeansError, KeyError):
    """Requested check id is not in the registry."""


class SuiteSelfTestFailure(PPTMeansError, AssertionError):
    """A negative control of the verification suite did not behave as expected."""
