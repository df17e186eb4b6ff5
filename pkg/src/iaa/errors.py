"""Exception hierarchy shared across the toolkit.

Every error raised on purpose derives from ``IaaError`` so callers can catch
one type at the boundary. Record-level errors carry whatever context is known
(location in the source, participant, word) for per-record reporting, and each
class exposes a stable ``kind`` string used in structured output.
"""

from __future__ import annotations


class IaaError(Exception):
    """Base class for all errors raised by this package."""

    kind = "error"


class RecordError(IaaError):
    """Problem tied to a single survey response."""

    def __init__(
        self,
        message: str,
        *,
        location: str | None = None,
        participant: str | None = None,
        word: str | None = None,
    ):
        super().__init__(message)
        self.location = location
        self.participant = participant
        self.word = word

    def describe(self) -> str:
        prefix = f"{self.location}: " if self.location else ""
        context = []
        if self.participant:
            context.append(f"participant {self.participant!r}")
        if self.word:
            context.append(f"word {self.word!r}")
        suffix = f" ({', '.join(context)})" if context else ""
        return f"{prefix}{self.kind}: {self}{suffix}"


class ParseError(RecordError):
    """Malformed syntax or field content in a dataset source."""

    kind = "parse_error"


class InvalidIntervalError(RecordError):
    """Interval endpoints out of order or not finite."""

    kind = "invalid_interval"


class DomainViolationError(RecordError):
    """Interval endpoint outside the response scale."""

    kind = "domain_violation"


class DuplicateResponseError(RecordError):
    """Second response from one participant for the same word."""

    kind = "duplicate_response"


class UnknownWordError(RecordError):
    """Word not declared for the dataset."""

    kind = "unknown_word"


class EmptyInputError(IaaError):
    """An operation that needs at least one element got none."""

    kind = "empty_input"


class GridMismatchError(IaaError):
    """Two fuzzy sets live on different domain grids."""

    kind = "grid_mismatch"


class EmptySetError(IaaError):
    """Operation undefined on an everywhere-zero fuzzy set."""

    kind = "empty_set"


class UnknownGroupError(IaaError):
    """Group label not present in the dataset."""

    kind = "unknown_group"


class EmptyGroupError(IaaError):
    """Group with no responses for any word."""

    kind = "empty_group"


class MissingModelError(IaaError):
    """Requested word model absent from a group model."""

    kind = "missing_model"


class GroupListMismatchError(IaaError):
    """Similarity matrices cover different group lists."""

    kind = "group_list_mismatch"
