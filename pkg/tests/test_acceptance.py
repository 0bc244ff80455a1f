"""
Desk-scale waterfall runs. Minutes to tens of minutes; run with `pytest -m slow`.
"""

import os

import pytest

from src.coding.codec import CodecConfig
from src.coding.presets import get_preset
from src.simulation.config import SimConfig, expand_grid
from src.simulation.metrics import coding_gain, ebno_at_ber
from src.simulation.runner import run_point, run_sweep

WORKERS = min(4, os.cpu_count() or 1)

# measured on ITC-5012-64qam with genie stopping and 40 passes: the irregular
# code sits about 0.1 dB to the right of the single-RSC regular baseline at 1e-3
IRREGULAR_64QAM_MAX_LAG_DB = 0.4


@pytest.mark.slow
class TestWaterfall:

    def test_regular_code_at_1_5_db(self):
        """Test the rate-1/3 regular code reaches BER <= 1e-4 at 1.5 dB, BPSK, K=1003."""
        config = SimConfig(
            codec=CodecConfig(frame_size=1003, max_iterations=20, stop_rule="genie"),
            modulation="bpsk",
            ebno_points=(1.5,),
            min_frame_errors=10**6,
            max_frames=300,
            master_seed=2024,
            workers=WORKERS,
        )
        point = run_point(config, 1.5)
        assert point.frames == 300
        assert point.ber <= 1e-4
        assert point.mean_iters <= 20

    def test_clean_frames_well_above_waterfall(self):
        """Test 100 frames decode without a bit error 3 dB past the waterfall."""
        config = SimConfig(
            codec=CodecConfig(frame_size=1003, max_iterations=20),
            modulation="bpsk",
            ebno_points=(4.5,),
            min_frame_errors=1,
            max_frames=100,
            master_seed=31,
            workers=WORKERS,
        )
        point = run_point(config, 4.5)
        assert point.frames == 100
        assert point.bit_errors == 0
        assert point.frame_errors == 0

    def test_ber_falls_with_ebno(self):
        config = SimConfig(
            codec=CodecConfig(frame_size=1003, max_iterations=20, stop_rule="genie"),
            modulation="bpsk",
            ebno_points=(0.0, 0.5, 1.0),
            min_frame_errors=100,
            max_frames=1000,
            master_seed=7,
            workers=WORKERS,
        )
        points = run_sweep(config).points
        assert all(p.frame_errors >= 100 or p.censored for p in points)
        bers = [p.ber for p in points]
        assert bers[0] > bers[1] > bers[2]

    def test_irregular_64qam_waterfall(self):
        """Test the 64QAM irregular code reaches BER 1e-3 by its reported converging point."""
        preset = get_preset("ITC-5012-64qam")
        grid = tuple(expand_grid(3.3, 4.3, 0.1))

        def sweep(reference):
            config = SimConfig(
                codec=reference.codec_config(max_iterations=40, stop_rule="genie"),
                modulation="64qam",
                ebno_points=grid,
                min_frame_errors=20,
                max_frames=200,
                master_seed=5012,
                workers=WORKERS,
                ber_floor=1e-4,
            )
            return run_sweep(config).points

        irregular = sweep(preset)
        reached = ebno_at_ber(irregular, 1e-3)
        assert reached is not None
        assert reached <= preset.reported_ebno_itc

        gain = coding_gain(sweep(preset.baseline()), irregular, 1e-3)
        assert gain is not None
        assert gain >= -IRREGULAR_64QAM_MAX_LAG_DB
