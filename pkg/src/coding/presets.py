"""Reference configurations from the published comparison tables.

`ITC-<frame>-<mod>` rows come from the frame-size comparison, `RATE-<rate>-<mod>`
rows from the code-rate comparison at 5012 bits. Reported figures are kept
for comparison only; rates are always recomputed from profile and pattern.
"""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from ..channel.phy import MODULATION_ORDERS
from .codec import CodecConfig
from .errors import ProfileError
from .profile import DegreeProfile, PuncturePattern, code_rate

NAMED_PATTERNS: Dict[str, str] = {
    "table": "11101101110",
    "nine": "101101110",
    "five-two": "10110",
    "five-one": "11110",
    "half": "10",
    "unpunctured": "1",
}

LABEL_TOLERANCE = 0.01

BPSK_PROFILE = "2:0.888,8:0.06,9:0.052"
QPSK_PROFILE = "2:0.96,6:0.04"
QAM16_PROFILE = "2:0.99,7:0.01"
QAM64_PROFILE = "2:0.85,7:0.15"


class ReferenceConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    frame_size: int
    modulation: str
    profile: DegreeProfile
    pattern: PuncturePattern
    label_rate: float
    reported_ebno_tc: Optional[float] = None
    reported_ebno_itc: Optional[float] = None
    reported_iterations_tc: Optional[int] = None
    reported_iterations_itc: Optional[int] = None
    reported_throughput: Optional[float] = None

    @property
    def nominal_rate(self) -> float:
        return code_rate(self.profile, self.pattern)

    @property
    def label_consistent(self) -> bool:
        return abs(self.nominal_rate - self.label_rate) <= LABEL_TOLERANCE

    def codec_config(self, **overrides) -> CodecConfig:
        fields = dict(
            frame_size=self.frame_size, profile=self.profile, pattern=self.pattern
        )
        fields.update(overrides)
        return CodecConfig(**fields)

    def baseline(self) -> "ReferenceConfig":
        """Regular degree-2 code at the same size and modulation (rate 1/3 or 1/2)."""
        pattern = "10" if self.label_rate >= 0.45 else "1"
        return self.model_copy(
            update=dict(
                name=f"{self.name}-regular",
                profile=DegreeProfile.regular(),
                pattern=PuncturePattern.parse(pattern),
                label_rate=0.5 if pattern == "10" else 0.33,
                reported_ebno_itc=None,
                reported_iterations_itc=None,
                reported_throughput=None,
            )
        )


# frame, modulation, label rate, profile, pattern, ebno TC/I-TC, iterations TC/I-TC
_FRAME_ROWS: List[Tuple] = [
    (1003, "bpsk", 0.33, BPSK_PROFILE, "table", 0.88, 1.30, 9, 21),
    (1003, "qpsk", 0.40, QPSK_PROFILE, "table", 1.04, 1.30, 12, 16),
    (1003, "16qam", 0.33, QAM16_PROFILE, "unpunctured", 3.00, 2.85, 14, 19),
    (1003, "64qam", 0.33, QAM64_PROFILE, "table", 5.90, 4.60, 22, 24),
    (5012, "bpsk", 0.33, BPSK_PROFILE, "table", 0.40, 0.20, 11, 31),
    (5012, "qpsk", 0.40, QPSK_PROFILE, "table", 0.70, 0.62, 15, 36),
    (5012, "16qam", 0.33, QAM16_PROFILE, "unpunctured", 2.50, 2.20, 14, 19),
    (5012, "64qam", 0.33, QAM64_PROFILE, "table", 5.40, 4.10, 24, 16),
    (10016, "bpsk", 0.33, BPSK_PROFILE, "table", 0.19, 0.17, 11, 26),
    (10016, "qpsk", 0.40, QPSK_PROFILE, "table", 0.60, 0.60, 10, 22),
    (10016, "16qam", 0.33, QAM16_PROFILE, "unpunctured", 2.30, 2.10, 18, 17),
    (10016, "64qam", 0.33, QAM64_PROFILE, "table", 5.38, 3.86, 7, 18),
    (20072, "bpsk", 0.33, BPSK_PROFILE, "table", 0.19, 0.17, 11, 18),
    (20072, "qpsk", 0.40, QPSK_PROFILE, "table", 0.49, 0.52, 10, 30),
    (20072, "16qam", 0.33, QAM16_PROFILE, "unpunctured", 2.30, 2.10, 13, 17),
    (20072, "64qam", 0.33, QAM64_PROFILE, "table", 5.20, 3.85, 13, 16),
]

# regular turbo code iterations in the code-rate comparison, by modulation and rate
REGULAR_ITERATIONS: Dict[Tuple[str, float], int] = {
    ("bpsk", 0.33): 11,
    ("bpsk", 0.50): 15,
    ("qpsk", 0.33): 15,
    ("qpsk", 0.50): 11,
    ("16qam", 0.33): 14,
    ("16qam", 0.50): 21,
    ("64qam", 0.33): 24,
    ("64qam", 0.50): 19,
}

# modulation, label rate, profile, pattern, ebno I-TC, throughput S, iterations I-TC
_RATE_ROWS: List[Tuple] = [
    ("bpsk", 0.33, BPSK_PROFILE, "table", 0.20, 0.32, 31),
    ("bpsk", 0.50, "2:0.95,9:0.05", "half", 0.75, 0.48, 30),
    ("qpsk", 0.40, QPSK_PROFILE, "table", 0.62, 0.76, 36),
    ("qpsk", 0.41, "2:0.95,5:0.05", "table", 0.51, 0.80, 23),
    ("16qam", 0.33, QAM16_PROFILE, "unpunctured", 2.20, 1.28, 19),
    ("16qam", 0.50, "2:0.94,3:0.06", "half", 3.50, 1.96, 26),
    ("64qam", 0.33, QAM64_PROFILE, "table", 4.10, 1.92, 16),
    ("64qam", 0.38, "2:0.96,9:0.04", "table", 4.30, 2.22, 23),
]


def regular_iterations(modulation: str, label_rate: float) -> Optional[int]:
    """Reported regular-code iterations for the baseline matching this label rate."""
    counterpart = 0.50 if label_rate >= 0.45 else 0.33
    return REGULAR_ITERATIONS.get((modulation, counterpart))


def _build() -> Dict[str, ReferenceConfig]:
    presets: Dict[str, ReferenceConfig] = {}
    for frame, mod, rate, profile, pattern, tc, itc, it_tc, it_itc in _FRAME_ROWS:
        name = f"ITC-{frame}-{mod}"
        presets[name] = ReferenceConfig(
            name=name,
            frame_size=frame,
            modulation=mod,
            profile=DegreeProfile.parse(profile),
            pattern=PuncturePattern.parse(NAMED_PATTERNS[pattern]),
            label_rate=rate,
            reported_ebno_tc=tc,
            reported_ebno_itc=itc,
            reported_iterations_tc=it_tc,
            reported_iterations_itc=it_itc,
        )
    for mod, rate, profile, pattern, itc, throughput, it_itc in _RATE_ROWS:
        name = f"RATE-{rate:.2f}-{mod}"
        presets[name] = ReferenceConfig(
            name=name,
            frame_size=5012,
            modulation=mod,
            profile=DegreeProfile.parse(profile),
            pattern=PuncturePattern.parse(NAMED_PATTERNS[pattern]),
            label_rate=rate,
            reported_ebno_itc=itc,
            reported_iterations_tc=regular_iterations(mod, rate),
            reported_iterations_itc=it_itc,
            reported_throughput=throughput,
        )
    return presets


PRESETS: Dict[str, ReferenceConfig] = _build()


def list_presets() -> List[str]:
    return list(PRESETS)


def get_preset(name: str) -> ReferenceConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ProfileError(f"unknown preset '{name}'") from None


def resolve_pattern(literal: str) -> PuncturePattern:
    """Accept a bitstring or one of the named patterns."""
    return PuncturePattern.parse(NAMED_PATTERNS.get(literal, literal))
