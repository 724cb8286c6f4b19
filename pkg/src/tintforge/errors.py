"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so raising the right class
matters more than the message text.
"""


class TintforgeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TintforgeError):
    """Bad user input: unreadable files, malformed hex codes, bad flags."""


class VocabError(InputError):
    """Color database violates the CSV contract (reported with line numbers)."""


class StoreError(InputError):
    """Embedding store file is malformed or a lookup failed."""


class NetworkError(TintforgeError):
    """A remote endpoint could not be reached after bounded retries."""


class SchemaError(TintforgeError):
    """A remote reply violated the agreed JSON contract, even after a re-ask."""


class GradientError(TintforgeError):
    """A guidance gradient came back non-finite."""


class PipelineStageError(TintforgeError):
    """Wraps a failure inside one named stage of the end-to-end pipeline."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
