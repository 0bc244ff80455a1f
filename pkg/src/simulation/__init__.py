"""Monte Carlo BER/FER simulation over the AWGN channel."""

from .config import SimConfig, SweepFile, expand_grid
from .metrics import (
    capacity_gap,
    coding_gain,
    converging_ebno,
    ebno_at_ber,
    ebno_to_snr,
    q_function,
    shannon_capacity,
    throughput,
    uncoded_bpsk_ber,
)
from .pipeline import FramePipeline, frame_rng
from .results import PointCounters, SimPoint, SimResult, merge, read_results, write_results
from .runner import SweepRunner, merge_all, run_point, run_sweep

__all__ = [
    "FramePipeline",
    "PointCounters",
    "SimConfig",
    "SimPoint",
    "SimResult",
    "SweepFile",
    "SweepRunner",
    "capacity_gap",
    "coding_gain",
    "converging_ebno",
    "ebno_at_ber",
    "ebno_to_snr",
    "expand_grid",
    "frame_rng",
    "merge",
    "merge_all",
    "q_function",
    "read_results",
    "run_point",
    "run_sweep",
    "shannon_capacity",
    "throughput",
    "uncoded_bpsk_ber",
    "write_results",
]
