"""Exception types shared across the package."""


class PiecepermError(Exception):
    """Base class for all package errors."""


class ParameterError(PiecepermError, ValueError):
    """Invalid user-supplied parameters (field, construction conditions, recipes)."""


class RecipeSyntaxError(ParameterError):
    """Malformed recipe text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message} (at position {position}){pointer}")


class InvariantViolation(PiecepermError, AssertionError):
    """A computed quantity broke a proven bound or an internal consistency check."""
