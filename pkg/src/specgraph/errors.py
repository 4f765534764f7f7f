"""Exception types shared across the package.

Plain ``ValueError`` is raised for invalid arguments; the classes here cover
the structured failure modes that callers may want to catch separately.
"""


class NumericFailure(RuntimeError):
    """An iterative numeric routine failed to converge within its cap."""


class SingularInput(ValueError):
    """An evaluation point coincides with a pole (e.g. z equal to an eigenvalue)."""


class DegenerateInput(ValueError):
    """Input violates a non-degeneracy hypothesis (e.g. shared minor eigenvalue)."""


class EdgeListParseError(ValueError):
    """Malformed edge-list file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
