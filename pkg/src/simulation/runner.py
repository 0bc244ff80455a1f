"""
Monte Carlo runner: frames per Eb/N0 point until enough frame errors.

Frames are evaluated in batches (in process, or on a worker pool) and folded
into the counters strictly in frame order, stopping at the exact frame that
satisfies the stopping rule. Each frame draws from its own seeded stream, so
results do not depend on the worker count.
"""

import logging
import multiprocessing
from typing import Iterator, List, Optional

from tqdm import tqdm

from .config import SimConfig
from .metrics import throughput
from .pipeline import FrameOutcome, FramePipeline
from .results import PointCounters, SimPoint, SimResult

logger = logging.getLogger(__name__)

BATCH_PER_WORKER = 4

_WORKER_PIPELINE: Optional[FramePipeline] = None


def _init_worker(config: SimConfig) -> None:
    global _WORKER_PIPELINE
    _WORKER_PIPELINE = FramePipeline(config)


def _simulate_frame(task) -> FrameOutcome:
    ebno_db, ebno_index, frame_index = task
    return _WORKER_PIPELINE.run_frame(ebno_db, ebno_index, frame_index)


class SweepRunner:
    """Runs the points of one SimConfig, sharing a pipeline and worker pool."""

    def __init__(self, config: SimConfig, progress: bool = True):
        self.config = config
        self.progress = progress
        self.pipeline = FramePipeline(config)
        self._pool = None

    def __enter__(self) -> "SweepRunner":
        if self.config.workers > 1:
            self._pool = multiprocessing.Pool(
                self.config.workers, initializer=_init_worker, initargs=(self.config,)
            )
        return self

    def __exit__(self, *exc) -> None:
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def _outcomes(self, ebno_db: float, ebno_index: int) -> Iterator[FrameOutcome]:
        batch = max(1, self.config.workers * BATCH_PER_WORKER)
        start = 0
        while start < self.config.max_frames:
            stop = min(start + batch, self.config.max_frames)
            tasks = [(ebno_db, ebno_index, f) for f in range(start, stop)]
            if self._pool is None:
                yield from (self.pipeline.run_frame(*task) for task in tasks)
            else:
                yield from self._pool.map(_simulate_frame, tasks)
            start = stop

    def count_point(self, ebno_db: float, ebno_index: int = 0) -> PointCounters:
        config = self.config
        counters = PointCounters()
        bar = tqdm(
            total=config.min_frame_errors,
            desc=f"Eb/N0 {ebno_db:g} dB",
            unit="err",
            disable=not self.progress,
            leave=False,
        )
        try:
            for outcome in self._outcomes(ebno_db, ebno_index):
                counters = counters.merge(
                    PointCounters(
                        frames=1,
                        bit_errors=outcome.bit_errors,
                        frame_errors=int(outcome.frame_error),
                        passes=outcome.passes,
                    )
                )
                if outcome.frame_error:
                    bar.update(1)
                bar.set_postfix(frames=counters.frames)
                if counters.frame_errors >= config.min_frame_errors:
                    break
        except Exception as e:
            logger.error(f"Simulation failed at Eb/N0 {ebno_db} dB: {str(e)}")
            raise
        finally:
            bar.close()
        return counters

    def summarize(self, ebno_db: float, counters: PointCounters) -> SimPoint:
        config = self.config
        frame_size = config.codec.frame_size
        frames = max(counters.frames, 1)
        fer = counters.frame_errors / frames
        mean_passes = counters.passes / frames
        regular = not config.uncoded and config.codec.profile.is_regular
        censored = counters.frame_errors < config.min_frame_errors
        nominal = self.pipeline.nominal_rate
        return SimPoint(
            ebno_db=float(ebno_db),
            frames=counters.frames,
            bit_errors=counters.bit_errors,
            frame_errors=counters.frame_errors,
            ber=counters.bit_errors / (frames * frame_size),
            fer=fer,
            mean_iters=mean_passes,
            throughput=throughput(nominal, self.pipeline.const.order, fer),
            nominal_rate=nominal,
            measured_rate=self.pipeline.measured_rate,
            censored=censored,
            mean_reported_iters=mean_passes / 2 if regular else mean_passes,
        )

    def run_point(self, ebno_db: float, ebno_index: int = 0) -> SimPoint:
        point = self.summarize(ebno_db, self.count_point(ebno_db, ebno_index))
        logger.info(
            f"ebno={point.ebno_db:g} frames={point.frames} ber={point.ber:.3e} "
            f"fer={point.fer:.3e} iters={point.mean_iters:.2f}"
            + (" censored" if point.censored else "")
        )
        return point

    def run_sweep(self) -> SimResult:
        result = SimResult(config=self.config)
        floor = self.config.ber_floor
        for index, ebno_db in enumerate(self.config.ebno_points):
            point = self.run_point(ebno_db, index)
            result.points.append(point)
            if floor is not None and point.ber < floor:
                remaining = len(self.config.ebno_points) - index - 1
                if remaining:
                    logger.info(
                        f"BER {point.ber:.3e} below floor {floor:g}; "
                        f"skipping {remaining} higher points"
                    )
                break
        return result


def run_point(
    config: SimConfig, ebno_db: float, ebno_index: int = 0, progress: bool = False
) -> SimPoint:
    with SweepRunner(config, progress=progress) as runner:
        return runner.run_point(ebno_db, ebno_index)


def run_sweep(config: SimConfig, progress: bool = False) -> SimResult:
    with SweepRunner(config, progress=progress) as runner:
        return runner.run_sweep()


def merge_all(counters: List[PointCounters]) -> PointCounters:
    """Fold partial counters of one point into a single tally."""
    total = PointCounters()
    for part in counters:
        total = total.merge(part)
    return total
