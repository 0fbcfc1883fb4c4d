"""Finite lattices, congruences and first-order checks on finite structures."""
from .errors import (
    InvalidParameter,
    InvalidStructure,
    ParseError,
    PreconditionError,
    SignatureError,
    SlimconError,
)

__version__ = "0.1.0"

__all__ = [
    "InvalidParameter",
    "InvalidStructure",
    "ParseError",
    "PreconditionError",
    "SignatureError",
    "SlimconError",
    "__version__",
]
