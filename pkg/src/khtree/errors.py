class KhError(Exception):
    """Base class for every error raised by this package."""


class MalformedCode(KhError):
    pass


class SplitDiagram(KhError):
    pass


class DanglingArc(KhError):
    pass


class MissingOrientation(KhError):
    pass


class DisconnectedTait(KhError):
    pass


class IncompatibleBand(KhError):
    pass


class GradingMismatch(KhError):
    pass


class NonUnitWeight(KhError):
    pass


class NotAComplex(KhError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotACycle(KhError):
    pass


class NotAKnot(KhError):
    pass


class NotAlternating(KhError):
    pass


class TooSmall(KhError):
    pass


class ObservationViolated(KhError):
    pass


class NoChain(KhError):
    pass
