"""Exception hierarchy for the fptriplet package."""


class FptripletError(Exception):
    """Root of all library errors."""


class PreconditionError(FptripletError, ValueError):
    """A documented precondition of an operation does not hold."""


class ConfigError(FptripletError):
    """Unknown or malformed configuration key, flag or preset."""


class EvaluationError(FptripletError, ArithmeticError):
    """A quadrature or special-function evaluation produced a non-finite value."""


class EnvelopeError(FptripletError):
    """A rejection envelope failed to dominate its target density."""


class BracketError(FptripletError):
    """Root bracketing for a crossing time did not converge."""


class CertificateError(FptripletError):
    """A density-decomposition certificate was rejected on the validation grid."""

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class FpdeError(FptripletError):
    """Monte Carlo estimation of the FPDE solution hit a non-finite value."""

    def __init__(self, message, x):
        super().__init__(message)
        self.x = x
