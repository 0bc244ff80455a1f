"""
Self-test: fast oracle and property checks of the whole coding chain.

Each check raises CheckFailed with a reason on failure; the runner times
every check and logs a ✓/✗ line per check.
"""

import logging
import math
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple, Union

import numpy as np

from ..channel.phy import constellation, demap
from ..coding import interleave
from ..coding.codec import CodecConfig, IrregularTurboCodec, extrinsic_combine
from ..coding.presets import PRESETS, get_preset
from ..coding.profile import DegreeProfile, realize
from ..coding.rsc import build_trellis, reference_parity
from ..coding.rsc import encode as rsc_encode
from ..coding.siso import SisoInput, exhaustive_app, log_map_decode
from ..simulation.metrics import shannon_capacity

logger = logging.getLogger(__name__)

# shipped inside the package so an installed `itc selftest` finds it
DEFAULT_GOLDEN = resources.files("src.coding").joinpath("data/rsc_impulse.txt")

ORACLE_TOLERANCE = 1e-6

GoldenSource = Union[str, Path, Any]


class CheckFailed(RuntimeError):
    """A self-test check found the coding chain off its reference."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailed(message)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


def load_golden(path: GoldenSource) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Parse "input"/"parity" line pairs; '#' starts a comment."""
    vectors = []
    pending: Optional[np.ndarray] = None
    source = Path(path) if isinstance(path, str) else path
    for line in source.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        bits = np.array([int(c) for c in value.strip()], dtype=np.int64)
        if key == "input":
            pending = bits
        elif key == "parity" and pending is not None:
            vectors.append((pending, bits))
            pending = None
        else:
            raise ValueError(f"unexpected golden line '{line}'")
    if not vectors:
        raise ValueError(f"no golden vectors in {path}")
    return vectors


def check_golden_vectors(path: GoldenSource) -> None:
    trellis = build_trellis()
    for bits, parity in load_golden(path):
        table = rsc_encode(bits, trellis).parity
        register = np.array(reference_parity(bits))
        _require(
            np.array_equal(register, parity),
            f"shift register gives {register.tolist()} for input {bits.tolist()}, "
            f"golden file says {parity.tolist()}",
        )
        _require(np.array_equal(table, parity), "trellis encoder disagrees with golden")


def check_termination() -> None:
    trellis = build_trellis()
    rng = np.random.default_rng(7)
    for length in (1, 5, 40):
        out = rsc_encode(rng.integers(0, 2, length), trellis)
        _require(out.final_state == 0, f"tail left state {out.final_state}")


def check_interleaver() -> None:
    for seed, size in ((0, 1), (1, 17), (2**63, 1000)):
        permutation = interleave.generate(seed, size)
        _require(permutation.is_bijection(), f"seed {seed} size {size} not a bijection")
        data = np.arange(size)
        back = interleave.invert_apply(permutation, interleave.apply(permutation, data))
        _require(np.array_equal(back, data), "deinterleave does not undo interleave")


def _random_section(rng: np.random.Generator, length: int) -> SisoInput:
    return SisoInput(
        systematic=rng.normal(0.0, 2.0, length),
        parity=rng.normal(0.0, 2.0, length),
        apriori=rng.normal(0.0, 1.0, length),
        tail_systematic=rng.normal(0.0, 2.0, 3),
        tail_parity=rng.normal(0.0, 2.0, 3),
    )


def check_log_map_oracle() -> None:
    trellis = build_trellis()
    rng = np.random.default_rng(6)
    length = realize(DegreeProfile.regular(), 6).repeated_length
    for _ in range(20):
        section = _random_section(rng, length)
        decoded = log_map_decode(section, trellis).app
        oracle = exhaustive_app(section, trellis)
        worst = float(np.max(np.abs(decoded - oracle)))
        _require(
            worst < ORACLE_TOLERANCE, f"Log-MAP off the exhaustive MAP by {worst:.2e}"
        )


def check_decomposition() -> None:
    trellis = build_trellis()
    section = _random_section(np.random.default_rng(3), 24)
    out = log_map_decode(section, trellis)
    rebuilt = section.systematic + section.apriori + out.extrinsic
    _require(np.allclose(out.app, rebuilt), "app != systematic + a priori + extrinsic")


def check_extrinsic_exchange() -> None:
    repetition = realize(DegreeProfile.parse("2:0.5,3:0.5"), 4)
    extrinsic = np.arange(1.0, repetition.repeated_length + 1)
    new_apriori, totals = extrinsic_combine(extrinsic, repetition)
    # degree-2 copies swap their extrinsics
    _require(
        new_apriori[0] == extrinsic[1] and new_apriori[1] == extrinsic[0],
        "degree-2 copies did not swap",
    )
    sums = np.bincount(repetition.layout_source, weights=new_apriori)
    _require(
        np.allclose(sums, (repetition.degree_of - 1) * totals), "(d-1) identity broken"
    )


def check_rate_bookkeeping() -> None:
    reference = get_preset("ITC-1003-bpsk")
    _require(
        round(reference.nominal_rate, 3) == 0.335,
        f"BPSK irregular rate {reference.nominal_rate:.4f}, expected 0.335",
    )
    for name, preset in PRESETS.items():
        k = preset.frame_size
        kept = preset.pattern.kept_count(realize(preset.profile, k).repeated_length)
        counted = k / (k + kept)
        _require(
            abs(counted - preset.nominal_rate) <= 1.0 / k,
            f"{name}: counted rate {counted:.5f} vs nominal {preset.nominal_rate:.5f}",
        )


def check_channel_math() -> None:
    _require(shannon_capacity(0.0) == 1.0, "capacity at 0 dB is not 1 bit")
    received = np.array([0.3, -1.2, 2.0], dtype=np.complex128)
    llrs = demap(received, constellation("bpsk"), 0.5)
    _require(
        np.allclose(llrs, 2.0 * received.real / 0.5, rtol=1e-12), "BPSK LLR != 2y/sigma2"
    )
    for modulation in ("qpsk", "16qam", "64qam"):
        energy = float(np.mean(np.abs(constellation(modulation).points) ** 2))
        _require(math.isclose(energy, 1.0), f"{modulation} energy {energy}")


def check_noiseless_roundtrip() -> None:
    codec = IrregularTurboCodec(
        CodecConfig(frame_size=40, profile=DegreeProfile.parse("2:0.9,5:0.1"))
    )
    bits = np.random.default_rng(11).integers(0, 2, 40)
    llrs = 8.0 * (1 - 2 * codec.encode(bits).bits().astype(np.float64))
    result = codec.decode(codec.split(llrs))
    _require(np.array_equal(result.decisions, bits), "noiseless frame decoded wrongly")


def build_checks(golden: GoldenSource) -> List[Tuple[str, Callable[[], None]]]:
    return [
        ("RSC golden vectors", lambda: check_golden_vectors(golden)),
        ("trellis termination", check_termination),
        ("interleaver bijection", check_interleaver),
        ("Log-MAP vs exhaustive MAP (K=6)", check_log_map_oracle),
        ("SISO decomposition", check_decomposition),
        ("extrinsic exchange identities", check_extrinsic_exchange),
        ("rate bookkeeping", check_rate_bookkeeping),
        ("channel math", check_channel_math),
        ("noiseless round trip", check_noiseless_roundtrip),
    ]


def run_selftest(golden: Optional[GoldenSource] = None) -> List[CheckResult]:
    results = []
    for name, check in build_checks(golden or DEFAULT_GOLDEN):
        start = time.perf_counter()
        try:
            check()
            passed, detail = True, ""
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        if passed:
            logger.info(f"✓ {name} ({elapsed:.2f}s)")
        else:
            logger.error(f"✗ {name} ({elapsed:.2f}s): {detail}")
        results.append(CheckResult(name, passed, elapsed, detail))
    return results
