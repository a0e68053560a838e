"""Exception types shared across the toolkit."""


class StatJpegError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(StatJpegError, ValueError):
    """An argument violates an operation's preconditions."""


class InvalidParamsError(StatJpegError, ValueError):
    """A parameter set violates its own invariants (e.g. t1 >= t2)."""


class EncodingRangeError(StatJpegError):
    """A quantized coefficient exceeds the 8-bit entropy-coding range."""


class CorruptStreamError(StatJpegError):
    """Entropy-coded data or file structure is malformed.

    ``offset`` is the byte position in the input where the problem was
    detected, when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedFeatureError(StatJpegError):
    """The file uses a JPEG feature outside the baseline subset we decode."""


class UnsupportedSizeError(StatJpegError):
    """Image dimensions exceed what the file format can represent."""


class UnsupportedFormatError(StatJpegError):
    """An input image file is in a format or bit depth we do not read."""


class InsufficientDataError(StatJpegError):
    """Too few samples were accumulated to finalize statistics."""


class SchemaVersionError(StatJpegError):
    """A persisted JSON document was written by an incompatible schema."""


class EmptySampleWarning(UserWarning):
    """Interval sampling selected no images (k larger than every class)."""
