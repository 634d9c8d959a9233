"""
Exception types shared by the codec, the filters and the CLI.
"""


class ImpulseToolkitError(Exception):
    """Base class for every error raised on purpose by this package."""


class PgmFormatError(ImpulseToolkitError):
    """A PGM byte stream could not be decoded."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class NoiseSpecError(ImpulseToolkitError, ValueError):
    """A noise description is invalid or could not be parsed."""


class FullyCorruptedError(ImpulseToolkitError):
    """The detector removed every pixel before the entropy threshold was reached."""


class UnrestorableImageError(ImpulseToolkitError):
    """The image has no clean pixel to restore from."""
