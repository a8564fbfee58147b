"""Exception types shared across the package."""

from __future__ import annotations


class ScreenGenderError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(ScreenGenderError):
    """A term list, user table or edge list could not be read.

    ``source`` names the stream and ``line`` is the 1-based line number
    when the problem is tied to a specific line.
    """

    def __init__(self, message: str, source: str = "<stream>", line: int | None = None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.reason = message


class LexiconError(ScreenGenderError):
    """Invalid lexicon configuration (for example an empty term union)."""


class EvaluationError(ScreenGenderError):
    """Evaluation inputs are inconsistent or empty."""


class EmptyInputError(EvaluationError):
    """Raised when an operation needs labeled users and there are none."""
