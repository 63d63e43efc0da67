"""Exception hierarchy.

Three families matter for the CLI exit codes: input parsing (exit 2),
input validation (exit 3), and verification failures (exit 1).
Everything derives from LaxforgeError so callers can catch broadly.
"""


class LaxforgeError(Exception):
    """Base class for all library errors."""


class ParseError(LaxforgeError):
    """Malformed input file or matrix encoding."""


class ValidationError(LaxforgeError):
    """Input does not satisfy a documented precondition."""


class VerificationError(LaxforgeError):
    """A mathematical property that should hold numerically does not."""


# -- validation family ------------------------------------------------------

class DimensionMismatch(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotSkewSymmetric(ValidationError):
    pass


class Singular(ValidationError):
    pass


class SelectionFailure(ValidationError):
    """Could not realize a real vector w for a real lambda^2."""


class EigenvectorDegenerate(ValidationError):
    pass


class DuplicateLambdaSq(ValidationError):
    pass


class WrongCount(ValidationError):
    pass


class VectorNotInVLambda(ValidationError):
    pass


class NotConjugateClosed(ValidationError):
    pass


class NotConjugatePair(ValidationError):
    pass


class DegenerateForm(ValidationError):
    pass


class HypothesisViolation(ValidationError):
    pass


class RingMismatch(ValidationError):
    pass


class DenominatorZero(ValidationError):
    pass


# -- verification family ----------------------------------------------------

class NoConvergence(VerificationError):
    """Eigenvalue iteration hit its cap; carries whatever was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SymmetryViolation(VerificationError):
    pass


class DimensionTooSmall(VerificationError):
    pass


class SingularRoot(VerificationError):
    pass


class DegenerateK(VerificationError):
    pass


class CaseMismatch(VerificationError):
    pass


class NotHamiltonian(VerificationError):
    pass


class RankDeficient(VerificationError):
    pass


class ResourceExceeded(LaxforgeError):
    """Groebner computation exceeded its pair/term-operation budget."""
