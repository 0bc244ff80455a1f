"""Throughput, capacity and curve read-outs over sweep results."""

import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from .results import SimPoint


def throughput(rate: float, order: int, fer: float) -> float:
    """Bits per channel use: R * log2(M) * (1 - FER)."""
    if not 0.0 <= fer <= 1.0:
        raise ValueError(f"fer must lie in [0, 1], got {fer}")
    return rate * math.log2(order) * (1.0 - fer)


def shannon_capacity(snr_db: float) -> float:
    return math.log2(1.0 + 10.0 ** (snr_db / 10.0))


def ebno_to_snr(ebno_db: float, rate: float, order: int) -> float:
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return ebno_db + 10.0 * math.log10(rate * math.log2(order))


def q_function(x):
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / math.sqrt(2.0))


def uncoded_bpsk_ber(ebno_db: float) -> float:
    return float(q_function(math.sqrt(2.0 * 10.0 ** (ebno_db / 10.0))))


def _sorted(points: Sequence[SimPoint]):
    return sorted(points, key=lambda p: p.ebno_db)


def converging_ebno(
    points: Sequence[SimPoint], frame_size: int, target_ber: float = 1e-5
) -> Optional[float]:
    """Smallest swept Eb/N0 whose BER is at or below the target.

    An error-free point only counts once enough bits were simulated to resolve
    the target (frames * K >= 1 / target).
    """
    for point in _sorted(points):
        if point.ber > target_ber:
            continue
        if point.bit_errors == 0 and point.frames * frame_size < 1.0 / target_ber:
            continue
        return point.ebno_db
    return None


def ebno_at_ber(points: Sequence[SimPoint], target_ber: float) -> Optional[float]:
    """Eb/N0 where the curve crosses target_ber, interpolating log10(BER) linearly.

    If the first point already sits at or below the target, its Eb/N0 is
    returned; a bracketing point with zero errors gives the upper point.
    """
    previous = None
    for point in _sorted(points):
        if point.ber <= target_ber:
            if previous is None or point.ber <= 0:
                return point.ebno_db
            lo, hi = math.log10(previous.ber), math.log10(point.ber)
            weight = (lo - math.log10(target_ber)) / (lo - hi)
            return previous.ebno_db + weight * (point.ebno_db - previous.ebno_db)
        previous = point
    return None


def coding_gain(
    baseline: Sequence[SimPoint], candidate: Sequence[SimPoint], target_ber: float
) -> Optional[float]:
    """Eb/N0 saved by the candidate at target_ber (positive when it is better)."""
    reference = ebno_at_ber(baseline, target_ber)
    improved = ebno_at_ber(candidate, target_ber)
    if reference is None or improved is None:
        return None
    return reference - improved


def capacity_gap(point: SimPoint, rate: float, order: int) -> float:
    """SNR distance (dB) from the Shannon limit at the point's throughput."""
    spectral = throughput(rate, order, point.fer)
    if spectral <= 0:
        raise ValueError("capacity gap is undefined at zero throughput")
    limit_db = 10.0 * math.log10(2.0**spectral - 1.0)
    return ebno_to_snr(point.ebno_db, rate, order) - limit_db
