"""Exceptions raised by the coding and channel layers."""


class ProfileError(ValueError):
    """Malformed degree profile, puncture pattern or preset name."""


class InterleaverError(ValueError):
    """Invalid interleaver size, seed or dump file."""


class FrameLengthError(ValueError):
    """Length mismatch between a stream and the structure it must fit."""
