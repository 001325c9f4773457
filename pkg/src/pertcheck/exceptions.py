"""Exception hierarchy shared by all pertcheck modules."""


class PertcheckError(Exception):
    """Base class for every error raised by pertcheck."""


class ParseError(PertcheckError, ValueError):
    """A data file could not be parsed; message carries file and line."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class InvariantViolation(PertcheckError, ValueError):
    pass


class EmptyResult(PertcheckError, LookupError):
    """A lexicon lookup produced nothing (signals template inapplicability)."""


class NotANumber(PertcheckError, ValueError):
    pass


class Inapplicable(PertcheckError):
    """A perturbation's preconditions do not hold for the given text.

    Raised by primitives and returned (not raised) by ``apply_template``;
    it is a normal outcome that becomes a skip record in a suite.
    """

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)

    def __eq__(self, other):
        return isinstance(other, Inapplicable) and other.reason == self.reason

    def __hash__(self):
        return hash(("Inapplicable", self.reason))


class EmptyPool(PertcheckError, ValueError):
    pass


class UnknownPrimitive(PertcheckError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown primitive"


class MalformedParams(PertcheckError, ValueError):
    pass


class ConfigError(PertcheckError, ValueError):
    pass


class ProviderError(PertcheckError):
    """A fill-mask provider failed."""


class NoCandidates(ProviderError):
    pass


class RemoteUnavailable(ProviderError):
    pass


class EmptyReference(PertcheckError, ValueError):
    pass


class AllOOV(PertcheckError, ValueError):
    pass


class DimensionMismatch(PertcheckError, ValueError):
    pass


class RangeViolation(PertcheckError, ValueError):
    pass


class MissingSample(PertcheckError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing sample"


class OutOfRange(PertcheckError, ValueError):
    pass


class MissingPenalty(PertcheckError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing penalty"


class MissingScore(PertcheckError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing score"


class DegenerateInput(PertcheckError, ValueError):
    pass


class EmptyMatrix(PertcheckError, ValueError):
    pass
