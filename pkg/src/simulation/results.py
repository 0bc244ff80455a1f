"""Per-point counters, result rows and CSV/JSON persistence."""

import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd

from .config import SimConfig

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "ebno_db",
    "frames",
    "bit_errors",
    "frame_errors",
    "ber",
    "fer",
    "mean_iters",
    "throughput",
    "nominal_rate",
    "measured_rate",
    "censored",
]

ITERATION_CONVENTION = (
    "mean_iters counts SISO passes per frame; mean_reported_iters halves "
    "them for the regular degree-2 baseline"
)


@dataclass(frozen=True)
class PointCounters:
    """Exact integer tallies for one Eb/N0 point."""

    frames: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    passes: int = 0

    def merge(self, other: "PointCounters") -> "PointCounters":
        return PointCounters(
            frames=self.frames + other.frames,
            bit_errors=self.bit_errors + other.bit_errors,
            frame_errors=self.frame_errors + other.frame_errors,
            passes=self.passes + other.passes,
        )


def merge(a: PointCounters, b: PointCounters) -> PointCounters:
    return a.merge(b)


@dataclass(frozen=True)
class SimPoint:
    ebno_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    mean_iters: float
    throughput: float
    nominal_rate: float
    measured_rate: float
    censored: bool
    mean_reported_iters: float = 0.0

    def to_row(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in CSV_COLUMNS}


@dataclass
class SimResult:
    config: SimConfig
    points: List[SimPoint] = field(default_factory=list)

    @property
    def censored(self) -> bool:
        return any(point.censored for point in self.points)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_row() for p in self.points], columns=CSV_COLUMNS)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(temp, path)
    except Exception:
        if os.path.exists(temp):
            os.unlink(temp)
        raise


def write_results(result: SimResult, csv_path: Union[str, Path]) -> Path:
    """Write the CSV and a JSON mirror next to it; both land atomically.

    Returns the JSON path.
    """
    csv_path = Path(csv_path)
    json_path = csv_path.with_suffix(".json")

    _atomic_write(csv_path, result.to_frame().to_csv(index=False))
    mirror = {
        "config": result.config.model_dump(mode="json"),
        "metadata": {
            "stop_rule": result.config.codec.stop_rule,
            "iteration_convention": ITERATION_CONVENTION,
            "rate_basis": result.config.rate_basis,
            "censored": result.censored,
        },
        "points": [asdict(point) for point in result.points],
    }
    _atomic_write(json_path, json.dumps(mirror, indent=2) + "\n")
    logger.info(f"Wrote {len(result.points)} rows to {csv_path} and {json_path}")
    return json_path


def read_results(path: Union[str, Path]) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ValueError(f"{path} is missing result columns {missing}")
    return frame
