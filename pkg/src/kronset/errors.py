"""Exception types shared across the package."""


class KronsetError(Exception):
    """Base class for all library errors."""


class GroupMismatchError(KronsetError):
    """Operands belong to different groups or have wrong coordinate counts."""


class BudgetExceededError(KronsetError):
    """A computation would exceed (or already exceeded) its work budget."""


class SetSpecError(KronsetError):
    """Malformed textual group/set specification."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
