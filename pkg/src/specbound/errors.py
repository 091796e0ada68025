"""Exception hierarchy.

Three families map onto CLI exit codes: parse problems (2), math-domain
violations (3) and series/solver convergence failures (4).
"""


class SpecBoundError(Exception):
    exit_code = 1


class ParseError(SpecBoundError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class MathDomainError(SpecBoundError, ValueError):
    exit_code = 3


class NonFiniteError(MathDomainError):
    pass


class NonSquareError(MathDomainError):
    pass


class OrderingLengthMismatch(MathDomainError):
    pass


class GaugeInfinite(MathDomainError):
    pass


class OnSpectrum(MathDomainError):
    pass


class ZeroPoint(MathDomainError):
    pass


class EmptySpectrum(MathDomainError):
    pass


class DegenerateRegion(MathDomainError):
    pass


class BadTruncationSize(MathDomainError):
    pass


class ConvergenceError(SpecBoundError, ArithmeticError):
    exit_code = 4


class TailNotConverged(ConvergenceError):
    pass
