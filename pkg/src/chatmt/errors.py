"""Exception hierarchy for the toolkit."""


class ChatMtError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ChatMtError):
    """Malformed input document; carries the byte offset when known."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class ConflictError(ChatMtError):
    """An insert collides with existing, differing state."""


class NotFoundError(ChatMtError):
    """A referenced entity does not exist."""


class ShortfallError(ChatMtError):
    """Fewer items available than requested."""

    def __init__(self, message: str, available: int):
        super().__init__(message)
        self.available = available


class InvalidSplitError(ChatMtError):
    """A requested dataset split cannot be satisfied."""


class EmptyDatasetError(ChatMtError):
    """Refusing to build a dataset with zero examples."""


class InvalidInputError(ChatMtError):
    """Operation preconditions violated."""


class AuthError(ChatMtError):
    """Backend credential is missing at call time."""


class InvalidPickError(ChatMtError):
    """A best-pick references a failed or mismatched record."""
