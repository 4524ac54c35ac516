"""Exception hierarchy."""


class WeylError(Exception):
    """Base class for all errors raised by this package."""


class ContextMismatch(WeylError, ValueError):
    """Operands live in Weyl algebras with different numbers of variables."""


class ParseError(WeylError, ValueError):
    """Malformed element text; ``pos`` is the offending character offset."""

    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class RankMismatch(WeylError, ValueError):
    """Module vectors or submodules of different ambient rank were combined."""


class NotFiniteLength(WeylError):
    """An element has zero annihilator, so the module cannot have finite length."""


class CapExceeded(WeylError):
    """An iteration or recursion cap was hit.

    Termination is guaranteed by theory for valid inputs; hitting a cap
    indicates either an input outside the hypotheses or a bug.
    """


class InternalError(WeylError):
    """A step that theory guarantees to succeed did not.

    ``identity`` names the sub-identity that failed, when there is one.
    """

    def __init__(self, message, identity=None):
        self.identity = identity
        if identity:
            message = f"{message} [{identity}]"
        super().__init__(message)
