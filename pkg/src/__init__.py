"""
Irregular Turbo Lab - Source Code Package.

Irregular turbo encoding and single-SISO Log-MAP decoding, the AWGN channel
with Gray-mapped QAM, and the Monte Carlo harness that sweeps BER/FER.
"""
