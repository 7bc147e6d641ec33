"""Exception types shared across the workbench."""


class QvarError(Exception):
    pass


class SignatureMismatch(QvarError):
    pass


class UnassignedVariable(QvarError):
    pass


class ElementOutOfRange(QvarError):
    pass


class SizeCapExceeded(QvarError):
    """A configured cap was hit.  Never raised silently in place of a result:
    callers either propagate it or downgrade their verdict and say so."""

    def __init__(self, what, limit, requested):
        super().__init__(f"{what}: requested {requested}, cap {limit}")
        self.what = what
        self.limit = limit
        self.requested = requested


class TrivialAlgebra(QvarError):
    pass


class NotInQuasivariety(QvarError):
    pass


class NotRSI(QvarError):
    pass


class NotAChain(QvarError):
    pass


class UnknownKey(QvarError):
    pass


class ParseError(QvarError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
