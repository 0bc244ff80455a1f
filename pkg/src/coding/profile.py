"""Degree profiles, puncture patterns and rate arithmetic.

A degree profile says which fraction of the information bits is repeated how
many times before interleaving; a puncture pattern says which parity bits are
kept. Together they fix the code rate.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .errors import FrameLengthError, ProfileError

logger = logging.getLogger(__name__)

FRACTION_TOLERANCE = 1e-9

ProfileEntries = Sequence[Tuple[int, float]]


def validate_profile(profile: Union["DegreeProfile", ProfileEntries]) -> List[str]:
    """Return the violated profile constraints; an empty list means valid."""
    entries = profile.entries if isinstance(profile, DegreeProfile) else profile
    problems: List[str] = []
    if not entries:
        return ["profile has no entries"]

    degrees = [int(d) for d, _ in entries]
    fractions = [float(f) for _, f in entries]

    for degree in degrees:
        if degree < 2:
            problems.append(f"degree {degree} < 2")
    duplicates = sorted({d for d in degrees if degrees.count(d) > 1})
    if duplicates:
        problems.append(f"duplicate degree {', '.join(map(str, duplicates))}")
    for fraction in fractions:
        if not 0.0 < fraction <= 1.0:
            problems.append(f"fraction {fraction} outside (0, 1]")

    total = math.fsum(fractions)
    if abs(total - 1.0) > FRACTION_TOLERANCE:
        problems.append(f"fractions sum to {total:.9g}, not 1")
    elif math.fsum(d * f for d, f in zip(degrees, fractions)) < 2.0:
        problems.append("average degree below 2")
    return problems


class DegreeProfile(BaseModel):
    """Ordered (degree, fraction) pairs of a repetition profile."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[int, float], ...]

    @field_validator("entries")
    @classmethod
    def _check_entries(cls, value: Tuple[Tuple[int, float], ...]):
        problems = validate_profile(value)
        if problems:
            raise ValueError("; ".join(problems))
        return value

    @classmethod
    def from_entries(cls, entries: ProfileEntries) -> "DegreeProfile":
        """Build a profile, raising ProfileError on the first violated constraint."""
        normalized = tuple((int(d), float(f)) for d, f in entries)
        problems = validate_profile(normalized)
        if problems:
            raise ProfileError(f"invalid degree profile: {'; '.join(problems)}")
        return cls(entries=normalized)

    @classmethod
    def parse(cls, literal: str) -> "DegreeProfile":
        """Parse the "2:0.888,8:0.06,9:0.052" literal form."""
        entries = []
        for token in literal.split(","):
            token = token.strip()
            degree_text, sep, fraction_text = token.partition(":")
            if not sep:
                raise ProfileError(f"bad profile token '{token}' (expected degree:fraction)")
            try:
                entries.append((int(degree_text), float(fraction_text)))
            except ValueError:
                raise ProfileError(f"bad profile token '{token}'") from None
        return cls.from_entries(entries)

    @classmethod
    def regular(cls) -> "DegreeProfile":
        """All information bits repeated twice: the regular turbo code."""
        return cls(entries=((2, 1.0),))

    @property
    def literal(self) -> str:
        return ",".join(f"{d}:{f:g}" for d, f in self.entries)

    @property
    def max_degree(self) -> int:
        return max(d for d, _ in self.entries)

    @property
    def is_regular(self) -> bool:
        return len(self.entries) == 1 and self.entries[0][0] == 2


class PuncturePattern(BaseModel):
    """Cyclic keep(1)/delete(0) mask applied to the parity stream."""

    model_config = ConfigDict(frozen=True)

    mask: Tuple[int, ...]

    @field_validator("mask")
    @classmethod
    def _check_mask(cls, value: Tuple[int, ...]):
        if not value:
            raise ValueError("puncture mask is empty")
        if any(flag not in (0, 1) for flag in value):
            raise ValueError("puncture mask must contain only 0 and 1")
        if not any(value):
            raise ValueError("puncture mask deletes every parity bit")
        return value

    @classmethod
    def parse(cls, literal: str) -> "PuncturePattern":
        """Parse a bitstring such as "11101101110"; "unpunctured" means "1"."""
        text = literal.strip()
        if text.lower() == "unpunctured":
            text = "1"
        bad = [ch for ch in text if ch not in "01"]
        if not text or bad:
            raise ProfileError(f"bad puncture token '{literal}'")
        if "1" not in text:
            raise ProfileError(f"puncture pattern '{literal}' keeps no parity bit")
        return cls(mask=tuple(int(ch) for ch in text))

    @classmethod
    def unpunctured(cls) -> "PuncturePattern":
        return cls(mask=(1,))

    @property
    def literal(self) -> str:
        return "".join(str(flag) for flag in self.mask)

    @property
    def f0(self) -> float:
        """Fraction of parity bits deleted."""
        return self.mask.count(0) / len(self.mask)

    @property
    def theta(self) -> float:
        return 1.0 / (2.0 - self.f0)

    def keep_mask(self, length: int) -> np.ndarray:
        """Boolean keep flags for the first `length` parity positions (phase 0)."""
        return np.resize(np.asarray(self.mask, dtype=bool), length)

    def kept_count(self, length: int) -> int:
        periods, remainder = divmod(length, len(self.mask))
        return periods * sum(self.mask) + sum(self.mask[:remainder])


def average_degree(profile: DegreeProfile) -> float:
    return math.fsum(d * f for d, f in profile.entries)


def code_rate(profile: DegreeProfile, pattern: PuncturePattern) -> float:
    """Nominal rate R = 1 / (1 + d̄(1/θ - 1)), tail excluded."""
    return 1.0 / (1.0 + average_degree(profile) * (1.0 / pattern.theta - 1.0))


@dataclass(frozen=True)
class RepetitionMap:
    """A profile realized over a K-bit frame.

    Copies of source bit j occupy the contiguous slice
    ``layout_source == j`` of the repeated stream, in source order.
    """

    source_count: int
    degree_of: np.ndarray
    layout_source: np.ndarray
    layout_copy: np.ndarray
    group_counts: Dict[int, int]

    @property
    def repeated_length(self) -> int:
        return int(self.layout_source.size)

    @property
    def first_copy(self) -> np.ndarray:
        """Repeated-stream position of copy 0 of every source bit."""
        return np.concatenate(([0], np.cumsum(self.degree_of)[:-1]))


def _largest_remainder(profile: DegreeProfile, frame_size: int) -> Dict[int, int]:
    raw = {d: round(f * frame_size, 9) for d, f in profile.entries}
    counts = {d: int(math.floor(value)) for d, value in raw.items()}
    deficit = frame_size - sum(counts.values())
    # ties go to the larger degree
    order = sorted(raw, key=lambda d: (raw[d] - counts[d], d), reverse=True)
    for degree in order[:deficit]:
        counts[degree] += 1
    return counts


def realize(profile: DegreeProfile, frame_size: int) -> RepetitionMap:
    """Assign a degree to each of the K source bits, low degrees first."""
    if frame_size < 1:
        raise FrameLengthError(f"frame size must be >= 1, got {frame_size}")
    if frame_size < len(profile.entries):
        raise ProfileError(
            f"frame size {frame_size} smaller than the {len(profile.entries)} "
            "profile entries"
        )

    counts = _largest_remainder(profile, frame_size)
    degree_of = np.repeat(
        np.array(sorted(counts), dtype=np.int64),
        [counts[d] for d in sorted(counts)],
    )
    layout_source = np.repeat(np.arange(frame_size, dtype=np.int64), degree_of)
    starts = np.concatenate(([0], np.cumsum(degree_of)[:-1]))
    layout_copy = np.arange(layout_source.size, dtype=np.int64) - starts[layout_source]

    logger.debug(f"Realized profile {profile.literal} over K={frame_size}: {counts}")
    return RepetitionMap(
        source_count=frame_size,
        degree_of=degree_of,
        layout_source=layout_source,
        layout_copy=layout_copy,
        group_counts=counts,
    )


def repeat_bits(bits: np.ndarray, repetition: RepetitionMap) -> np.ndarray:
    bits = np.asarray(bits)
    if bits.size != repetition.source_count:
        raise FrameLengthError(
            f"frame has {bits.size} bits, repetition map expects "
            f"{repetition.source_count}"
        )
    return bits[repetition.layout_source]


def puncture(parity: np.ndarray, pattern: PuncturePattern) -> np.ndarray:
    parity = np.asarray(parity)
    return parity[pattern.keep_mask(parity.size)]


def depuncture(
    kept: np.ndarray, pattern: PuncturePattern, full_length: int
) -> np.ndarray:
    """Restore kept LLRs to their positions; deleted positions become 0 (erasure)."""
    kept = np.asarray(kept, dtype=np.float64)
    mask = pattern.keep_mask(full_length)
    if kept.size != int(mask.sum()):
        raise FrameLengthError(
            f"{kept.size} kept values, pattern {pattern.literal} keeps "
            f"{int(mask.sum())} of {full_length}"
        )
    restored = np.zeros(full_length, dtype=np.float64)
    restored[mask] = kept
    return restored
