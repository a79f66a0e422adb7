"""Exception hierarchy shared by all betalab modules."""


class BetalabError(Exception):
    """Base class for every error raised by betalab."""


class MalformedEquation(BetalabError, ValueError):
    pass


class BaseMismatch(BetalabError, ValueError):
    pass


class ApproximateModeInconclusive(BetalabError):
    """A non-exact base ran out of horizon or precision.

    The digits computed so far are kept on ``digits``.
    """

    def __init__(self, message, digits=()):
        super().__init__(message)
        self.digits = tuple(digits)


class UnknownTail(BetalabError):
    pass


class HorizonExceeded(BetalabError):
    pass


class NotAdmissible(BetalabError, ValueError):
    pass


class NotLexMaximal(BetalabError, ValueError):
    pass


class ZeroMatrix(BetalabError, ValueError):
    pass


class NotMixing(BetalabError, ValueError):
    pass


class LexConditionFailed(BetalabError, ValueError):
    pass


class VerificationFailed(BetalabError):
    """A verification step found a counterexample, stored on ``witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InadmissibleInput(BetalabError, ValueError):
    pass


class AmbientMismatch(BetalabError, ValueError):
    pass


class SpanTooLarge(BetalabError):
    pass


class NoBranchingFound(BetalabError):
    pass
