"""Exception types shared across the package."""


class SlimconError(Exception):
    """Base class for all errors raised by slimcon."""


class InvalidParameter(SlimconError, ValueError):
    """A numeric or symbolic parameter is outside its allowed range."""


class InvalidStructure(SlimconError, ValueError):
    """An input structure violates an invariant (not a poset, not a lattice, ...)."""


class PreconditionError(SlimconError, ValueError):
    """An operation was called on an input outside its domain of definition."""


class SignatureError(SlimconError, ValueError):
    """Unknown symbol, arity mismatch, or mismatched signatures."""


class ParseError(SlimconError, ValueError):
    """Lexical or syntax error in formula source text."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
