"""Modulation, AWGN channel and soft demapping."""

from .phy import ChannelParams, Constellation, awgn, constellation, demap, map_bits

__all__ = [
    "ChannelParams",
    "Constellation",
    "awgn",
    "constellation",
    "demap",
    "map_bits",
]
