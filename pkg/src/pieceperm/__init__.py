"""Piecewise permutations over GF(2^n) and their cryptographic metrics."""
from .errors import InvariantViolation, ParameterError, PiecepermError, RecipeSyntaxError
from .gf2n import FieldSpec, make_field, parse_field_spec
from .funcrep import AffineMap, LutFunction

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "FieldSpec", "InvariantViolation", "LutFunction", "ParameterError",
    "PiecepermError", "RecipeSyntaxError", "make_field", "parse_field_spec",
]
