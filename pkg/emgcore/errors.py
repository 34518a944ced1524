"""
Error hierarchy shared by all Silent Speech Decoder packages.

Every failure raised on purpose derives from DecoderError, so the command line
entry point can report it and exit with a nonzero status.
"""


class DecoderError(Exception):
    """Root of all pipeline errors."""


class InvalidConfig(DecoderError):
    pass


class StoreFormatError(DecoderError):
    pass


class ParseError(DecoderError):
    """Raised when a packet capture cannot be decoded; ``offset`` is the byte offset."""

    def __init__(self, message, offset=0):
        super().__init__(message)
        self.offset = offset


class BadMagic(ParseError):
    pass


class ShortFrame(ParseError):
    pass


class OutOfBounds(DecoderError):
    """A code or a prompt event falls outside its valid range; ``event`` names the prompt event, if any."""

    def __init__(self, message, event=None):
        super().__init__(message)
        self.event = event


class InvalidCutoff(DecoderError):
    pass


class InvalidCenter(DecoderError):
    pass


class UnstableFilter(DecoderError):
    pass


class TooShort(DecoderError):
    pass


class LengthMismatch(DecoderError):
    pass


class EmptyTrainingSet(DecoderError):
    pass


class DimensionMismatch(DecoderError):
    pass


class MissingBatch(DecoderError):
    pass


class TooFewPerLabel(DecoderError):
    pass


class WrongSessionCount(DecoderError):
    pass
