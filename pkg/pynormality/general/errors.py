"""Exceptions that carry a meaning beyond a plain `ValueError`, the command line
tool maps each of them onto an exit code.
"""

class PredicateSyntaxError(ValueError):
    """Predicate text could not be parsed (or names an unknown identifier)."""

    def __init__(self, msg, text = "", line = 1, col = 1):
        self.text = text
        self.line = line
        self.col = col
        super().__init__(f"{msg} (line {line}, column {col})")

class PredicateEvaluationError(ArithmeticError):
    """A predicate failed while being evaluated, e.g. `x % 0`."""

class ConstructionError(AssertionError):
    """A guarantee of the construction does not hold."""

class ResourceLimitError(RuntimeError):
    """A digit run was stopped before producing the requested digits.

    Parameters
    ----------
    msg : str
        Description of the limit that was hit.
    partial : DigitBlock
        Digits produced before stopping.
    """

    def __init__(self, msg, partial):
        self.partial = partial
        super().__init__(msg)

class TraceFormatError(ValueError):
    """A trace file is not in the expected line-delimited format."""
