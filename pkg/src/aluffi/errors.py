"""Exception hierarchy shared by every layer of the package."""


class AluffiError(Exception):
    """Base class for all package errors."""


class RingError(AluffiError):
    """Malformed ring description or mismatched rings."""


class RingMismatchError(RingError):
    pass


class ParseError(AluffiError):
    """Polynomial text that does not conform to the grammar."""

    def __init__(self, message, line=1, column=1, text=None):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"{message} (line {line}, column {column})")


class DegreeCapExceeded(AluffiError):
    pass


class BudgetExceeded(AluffiError):
    """A step or wall-time budget ran out; the computation is undecided, not wrong."""


class GeneratorCapExceeded(AluffiError):
    pass


class PreconditionError(AluffiError):
    """An operation's mathematical precondition failed; ``witness`` names the culprit."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
