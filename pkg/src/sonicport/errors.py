"""Exception hierarchy.

Domain errors map to CLI exit status 1, configuration errors to 2.
"""


class SonicError(Exception):
    """Base class for every error raised by sonicport."""

    exit_code = 1


class DomainError(SonicError, ValueError):
    exit_code = 1


class ConfigError(SonicError):
    exit_code = 2


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ConfigError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


# acoustic geometry
class ZeroAmplitude(DomainError):
    pass


class GridTooSmall(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class AtHorizon(DomainError):
    pass


class NoHorizon(DomainError):
    pass


class NonTransonic(DomainError):
    pass


class NonPositiveAlpha(DomainError):
    pass


class NonPositiveFrequency(DomainError):
    pass


# fock space
class CutoffTooSmall(DomainError):
    pass


class NegativeSqueeze(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class NegativeEigenvalue(DomainError):
    pass


# teleport
class NonUnitaryMeasurement(DomainError):
    pass


class ShiftOutOfRange(DomainError):
    pass
