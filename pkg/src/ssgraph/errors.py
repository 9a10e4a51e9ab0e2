"""Exception hierarchy.

Every error carries an optional ``witness`` so callers (and the CLI) can
print the concrete object that broke a precondition.
"""


class SSGraphError(Exception):
    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ValidationError(SSGraphError):
    """Malformed input. The CLI maps these to exit code 1."""


class PreconditionError(SSGraphError):
    """Well-formed input that violates a hypothesis. Exit code 2."""

    exit_code = 2


class SpecError(ValidationError):
    pass


class DanglingEndpoint(ValidationError):
    pass


class DuplicateName(ValidationError):
    pass


class EquivarianceViolation(ValidationError):
    pass


class CocycleViolation(ValidationError):
    pass


class FactorizationNotBijective(ValidationError):
    pass


class CubeConditionFailed(ValidationError):
    pass


class SourcePresent(ValidationError):
    pass


class FactorizationEquivarianceViolation(ValidationError):
    pass


class MalformedSequence(ValidationError):
    pass


class ClosureCapExceeded(PreconditionError):
    pass


class NotATail(PreconditionError):
    pass


class NotSingular(PreconditionError):
    pass


class NotPseudoFree(PreconditionError):
    pass


class EssentialCentralityViolated(PreconditionError):
    pass
