"""Irregular turbo coding: profiles, interleaver, RSC, Log-MAP SISO and codec."""

from .codec import (
    ChannelLlrs,
    CodecConfig,
    DecodeResult,
    EncodedFrame,
    IrregularTurboCodec,
    codec_for,
    extrinsic_combine,
)
from .errors import FrameLengthError, InterleaverError, ProfileError
from .profile import DegreeProfile, PuncturePattern, average_degree, code_rate

__all__ = [
    "ChannelLlrs",
    "CodecConfig",
    "DecodeResult",
    "DegreeProfile",
    "EncodedFrame",
    "FrameLengthError",
    "InterleaverError",
    "IrregularTurboCodec",
    "ProfileError",
    "PuncturePattern",
    "average_degree",
    "code_rate",
    "codec_for",
    "extrinsic_combine",
]
