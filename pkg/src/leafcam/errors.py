"""Shared exception hierarchy."""


class LeafcamError(Exception):
    """Base class for all leafcam errors."""


class FormatError(LeafcamError):
    """A byte stream or text file violates one of the supported formats."""


class ShapeMismatch(LeafcamError):
    """Array arguments disagree on their declared dimensions."""


class NonFiniteValues(FormatError):
    """An input tensor contains NaN or infinity."""


class NoGroundTruth(LeafcamError):
    """Evaluation was requested against an empty ground-truth set."""
