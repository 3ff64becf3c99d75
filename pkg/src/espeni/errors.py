"""Exception hierarchy for the espeni package.

Two broad families map onto the CLI exit codes: validation problems
(bad ranges, unknown keys, conflicting flags -> exit 1) and input
problems (unreadable files, malformed CSV, failed downloads -> exit 2).
"""


class EspeniError(Exception):
    """Base class for all espeni errors."""


class ValidationError(EspeniError):
    """Data violates a contract (range, invariant, configuration)."""


class CalendarRangeError(ValidationError):
    """Requested dates fall outside the supported clock-rule era."""


class MissingKeyError(ValidationError):
    """A settlement key is not covered by the generated calendar."""


class CoverageError(ValidationError):
    """Parsed rows reference keys the calendar does not cover."""

    def __init__(self, message: str, keys: list[str] | None = None):
        super().__init__(message)
        self.keys = keys or []


class IngestGapError(ValidationError):
    """A run of more than one consecutive settlement key is missing at ingest."""


class ImputeError(ValidationError):
    """Imputation has no valid anchor rows to interpolate from."""


class ConfigError(ValidationError):
    """Pipeline configuration is missing or inconsistent."""


class ConflictError(ValidationError):
    """A re-downloaded file differs from the copy already on disk."""


class ParseError(EspeniError):
    """A source file contains a cell that cannot be parsed."""


class SchemaError(EspeniError):
    """A source file lacks required columns or a recognisable header."""


class FetchError(EspeniError):
    """An HTTP download failed; retrying later may succeed."""


class PipelineError(EspeniError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
