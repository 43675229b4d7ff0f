"""Exception types shared across the package."""


class HgameError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(HgameError):
    """Invalid instance, partition, or argument."""


class OutOfRange(ValidationError):
    pass


class ConflictingRelation(ValidationError):
    pass


class IncompleteRelation(ValidationError):
    pass


class ParseError(ValidationError):
    """Syntax error in an input file; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingAgent(ValidationError):
    pass


class DuplicateAgent(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class AgentNotInCoalition(ValidationError):
    pass


class ModeMismatch(ValidationError):
    pass


class DegreeTooHigh(ValidationError):
    pass


class RepMismatch(ValidationError):
    """Interval representation contradicts the graph it claims to represent."""


class NotCubic(ValidationError):
    pass


class BadProbabilities(ValidationError):
    pass


class LiteralCountExceeded(ValidationError):
    pass


class LiteralCountMismatch(ValidationError):
    pass


class FrequencyExceeded(ValidationError):
    pass


class SizeGuard(HgameError):
    """A brute-force oracle was asked for more than its guard allows."""


class BudgetExceeded(HgameError):
    """An exhaustive search ran out of its node budget."""
