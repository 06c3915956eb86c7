"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to the
documented process status without a lookup table.
"""


class ZetaPhaseError(Exception):
    exit_code = 2


class DomainError(ZetaPhaseError, ValueError):
    pass


class PoleAtOne(DomainError):
    def __init__(self, msg="pole at s=1"):
        super().__init__(msg)


class SingularChi(DomainError):
    pass


class AccuracyNotMet(ZetaPhaseError, ArithmeticError):
    pass


class CertificateViolation(ZetaPhaseError, ArithmeticError):
    pass


class PhaseSlip(ZetaPhaseError, ArithmeticError):
    pass


class NotAZero(DomainError):
    pass


class EndpointAtZero(DomainError):
    pass


class ZeroOnContour(DomainError):
    pass


class MissedZeroSuspected(ZetaPhaseError, ArithmeticError):
    pass


class RangeNotCovered(DomainError):
    pass


class TooFewSamples(ZetaPhaseError, ValueError):
    exit_code = 3


class ParseError(ZetaPhaseError, ValueError):
    exit_code = 4

    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class MonotonicityError(ParseError):
    pass
