"""Simulation settings and the JSON sweep file."""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..channel.phy import MODULATION_ORDERS, ChannelParams
from ..coding.codec import CodecConfig, StopRule
from ..coding.presets import get_preset, resolve_pattern
from ..coding.profile import DegreeProfile

logger = logging.getLogger(__name__)

Modulation = Literal["bpsk", "qpsk", "16qam", "64qam"]

SEED_LIMIT = 2**64


class SimConfig(BaseModel):
    """One Monte Carlo sweep: codec, modulation and the Eb/N0 grid."""

    model_config = ConfigDict(frozen=True)

    codec: CodecConfig
    modulation: Modulation = "bpsk"
    ebno_points: Tuple[float, ...] = Field(min_length=1)
    min_frame_errors: int = Field(default=100, ge=1)
    max_frames: int = Field(default=10_000, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)
    workers: int = Field(default=1, ge=1)
    uncoded: bool = False
    rate_basis: Literal["nominal", "measured"] = "nominal"
    exact_demap: bool = True
    ber_floor: Optional[float] = Field(default=None, gt=0, lt=1)

    @model_validator(mode="after")
    def _grid_has_usable_noise(self):
        """Reject grid points whose noise variance is not a positive finite number."""
        rate = 1.0 if self.uncoded else self.codec.nominal_rate
        for ebno_db in self.ebno_points:
            ChannelParams(ebno_db=ebno_db, rate=rate, bits_per_symbol=self.bits_per_symbol)
        return self

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(MODULATION_ORDERS[self.modulation]))


def expand_grid(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid start..stop, values rounded to 1e-9."""
    if step <= 0:
        raise ValueError(f"ebno step must be > 0, got {step}")
    if stop < start:
        raise ValueError(f"ebno stop {stop} below start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 9) for i in range(count)]


class SweepFile(BaseModel):
    """Flat sweep description, as read from a JSON config or assembled from flags.

    Either ``frame_size`` or ``preset`` must be present; explicit fields win
    over the preset's values. ``interleaver_seed`` defaults to ``seed`` so a
    single seed drives every random choice.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    preset: Optional[str] = None
    frame_size: Optional[int] = Field(default=None, ge=1)
    profile: Optional[str] = None
    puncture: Optional[str] = None
    seed: int = Field(default=0, ge=0, lt=SEED_LIMIT)
    interleaver_seed: Optional[int] = Field(default=None, ge=0, lt=SEED_LIMIT)
    modulation: Optional[Modulation] = None
    ebno: Union[Tuple[float, float, float], float]
    max_iter: int = Field(default=20, ge=1)
    stop_rule: StopRule = "stable-decisions"
    min_frame_errors: int = Field(default=100, ge=1)
    max_frames: int = Field(default=10_000, ge=1)
    workers: int = Field(default=1, ge=1)
    uncoded: bool = False
    rate_basis: Literal["nominal", "measured"] = "nominal"
    ber_floor: Optional[float] = Field(default=None, gt=0, lt=1)

    @field_validator("ebno", mode="before")
    @classmethod
    def _coerce_ebno(cls, value):
        if isinstance(value, list):
            if len(value) == 1:
                return float(value[0])
            return tuple(value)
        return value

    @model_validator(mode="after")
    def _needs_frame_size(self):
        if self.frame_size is None and self.preset is None:
            raise ValueError("either frame_size or preset is required")
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SweepFile":
        with open(path, "r") as f:
            return cls(**json.load(f))

    @property
    def ebno_points(self) -> List[float]:
        if isinstance(self.ebno, tuple):
            return expand_grid(*self.ebno)
        return [float(self.ebno)]

    def codec_config(self) -> CodecConfig:
        fields = {}
        if self.preset is not None:
            reference = get_preset(self.preset)
            fields.update(
                frame_size=reference.frame_size,
                profile=reference.profile,
                pattern=reference.pattern,
            )
        if self.frame_size is not None:
            fields["frame_size"] = self.frame_size
        if self.profile is not None:
            fields["profile"] = DegreeProfile.parse(self.profile)
        if self.puncture is not None:
            fields["pattern"] = resolve_pattern(self.puncture)
        seed = self.seed if self.interleaver_seed is None else self.interleaver_seed
        return CodecConfig(
            interleaver_seed=seed,
            max_iterations=self.max_iter,
            stop_rule=self.stop_rule,
            **fields,
        )

    def to_sim_config(self) -> SimConfig:
        modulation = self.modulation
        if modulation is None:
            modulation = get_preset(self.preset).modulation if self.preset else "bpsk"
        return SimConfig(
            codec=self.codec_config(),
            modulation=modulation,
            ebno_points=tuple(self.ebno_points),
            min_frame_errors=self.min_frame_errors,
            max_frames=self.max_frames,
            master_seed=self.seed,
            workers=self.workers,
            uncoded=self.uncoded,
            rate_basis=self.rate_basis,
            ber_floor=self.ber_floor,
        )
