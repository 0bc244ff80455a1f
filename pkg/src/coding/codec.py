"""Irregular turbo encoder and single-SISO iterative decoder.

Encoding: repeat each information bit per its degree, interleave, run the one
RSC, puncture the parity. Only the original K information bits are sent as
systematic bits, followed by the kept parity and the 6 tail bits.

Decoding: the received systematic LLRs are repeated and interleaved the same
way and decoded by one Log-MAP pass per iteration. Between passes each copy of
a bit receives as a priori the sum of the extrinsics of its other copies.
In the "scaled" channel mode each copy carries 1/d of the systematic LLR and
the other copies' shares ride along in its a priori, so every SISO input
still sees the full channel LLR once.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import interleave
from .errors import FrameLengthError, ProfileError
from .profile import (
    DegreeProfile,
    PuncturePattern,
    RepetitionMap,
    code_rate,
    depuncture,
    puncture,
    realize,
    repeat_bits,
)
from .rsc import MEMORY, build_trellis
from .rsc import encode as rsc_encode
from .siso import SisoInput, log_map_decode

logger = logging.getLogger(__name__)

TAIL_LENGTH = 2 * MEMORY

StopRule = Literal["fixed", "stable-decisions", "genie"]


class CodecConfig(BaseModel):
    """Everything needed to build one irregular (or regular) turbo codec."""

    model_config = ConfigDict(frozen=True)

    frame_size: int = Field(ge=1)
    profile: DegreeProfile = Field(default_factory=DegreeProfile.regular)
    pattern: PuncturePattern = Field(default_factory=PuncturePattern.unpunctured)
    interleaver_seed: int = Field(default=0, ge=0, lt=2**64)
    max_iterations: int = Field(default=20, ge=1)
    stop_rule: StopRule = "stable-decisions"
    exact_log_map: bool = True
    channel_llr_mode: Literal["full", "scaled"] = "full"
    final_channel_weight: Literal["once", "per_copy"] = "once"

    @model_validator(mode="after")
    def _frame_fits_profile(self):
        if self.frame_size < len(self.profile.entries):
            raise ValueError(
                f"frame_size {self.frame_size} smaller than the "
                f"{len(self.profile.entries)} profile entries"
            )
        return self

    @property
    def nominal_rate(self) -> float:
        return code_rate(self.profile, self.pattern)


@dataclass(frozen=True)
class EncodedFrame:
    systematic: np.ndarray
    parity: np.ndarray
    tail: np.ndarray

    @property
    def kept_parity(self) -> int:
        return int(self.parity.size)

    @property
    def transmitted_length(self) -> int:
        return int(self.systematic.size + self.parity.size + self.tail.size)

    def bits(self) -> np.ndarray:
        """Transmission order: systematic, kept parity, tail."""
        return np.concatenate((self.systematic, self.parity, self.tail)).astype(np.int8)


@dataclass(frozen=True)
class ChannelLlrs:
    systematic: np.ndarray
    parity: np.ndarray
    tail: np.ndarray


@dataclass(frozen=True)
class IterationSnapshot:
    iteration: int
    extrinsic: np.ndarray
    next_apriori: np.ndarray
    app_total: np.ndarray
    decisions: np.ndarray


@dataclass(frozen=True)
class DecodeResult:
    decisions: np.ndarray
    iterations_used: int
    converged: bool
    final_app: np.ndarray
    regular: bool = False

    @property
    def reported_iterations(self) -> float:
        """SISO passes, halved for the regular baseline to count turbo iterations."""
        return self.iterations_used / 2 if self.regular else float(self.iterations_used)


def extrinsic_combine(
    extrinsic: np.ndarray, repetition: RepetitionMap
) -> tuple[np.ndarray, np.ndarray]:
    """New a priori for every copy: the sum of the other copies' extrinsics.

    `extrinsic` is in repetition-layout (deinterleaved) order. Returns the new
    a priori in the same order and the per-source sum of all copies.
    """
    extrinsic = np.asarray(extrinsic, dtype=np.float64)
    if extrinsic.size != repetition.repeated_length:
        raise FrameLengthError(
            f"{extrinsic.size} extrinsics for a repeated stream of "
            f"{repetition.repeated_length}"
        )
    if repetition.degree_of.min() < 2:
        raise ProfileError("extrinsic combination needs at least 2 copies per bit")
    totals = np.bincount(
        repetition.layout_source,
        weights=extrinsic,
        minlength=repetition.source_count,
    )
    return totals[repetition.layout_source] - extrinsic, totals


class IrregularTurboCodec:
    """Realized codec: repetition map, interleaver and trellis for one config."""

    def __init__(self, config: CodecConfig):
        self.config = config
        self.trellis = build_trellis()
        self.repetition = realize(config.profile, config.frame_size)
        self.permutation = interleave.generate(
            config.interleaver_seed, self.repetition.repeated_length
        )
        self.keep_mask = config.pattern.keep_mask(self.repetition.repeated_length)
        logger.info(
            f"Codec K={config.frame_size} profile={config.profile.literal} "
            f"pattern={config.pattern.literal} M_rep={self.repetition.repeated_length} "
            f"R={config.nominal_rate:.4f}"
        )

    @property
    def kept_parity(self) -> int:
        return int(self.keep_mask.sum())

    @property
    def transmitted_length(self) -> int:
        return self.config.frame_size + self.kept_parity + TAIL_LENGTH

    @property
    def measured_rate(self) -> float:
        return self.config.frame_size / self.transmitted_length

    def encode(self, bits: np.ndarray) -> EncodedFrame:
        bits = np.asarray(bits, dtype=np.int8)
        repeated = repeat_bits(bits, self.repetition)
        rsc = rsc_encode(interleave.apply(self.permutation, repeated), self.trellis)
        return EncodedFrame(
            systematic=bits.copy(),
            parity=puncture(rsc.parity, self.config.pattern),
            tail=np.concatenate((rsc.tail_systematic, rsc.tail_parity)),
        )

    def split(self, llrs: np.ndarray) -> ChannelLlrs:
        """Cut a received LLR stream (transmission order) into its three parts."""
        llrs = np.asarray(llrs, dtype=np.float64)
        if llrs.size != self.transmitted_length:
            raise FrameLengthError(
                f"received {llrs.size} LLRs, frame carries {self.transmitted_length}"
            )
        k, kept = self.config.frame_size, self.kept_parity
        return ChannelLlrs(
            systematic=llrs[:k],
            parity=llrs[k : k + kept],
            tail=llrs[k + kept :],
        )

    def _check_lengths(self, channel: ChannelLlrs) -> None:
        expected = (self.config.frame_size, self.kept_parity, TAIL_LENGTH)
        found = (channel.systematic.size, channel.parity.size, channel.tail.size)
        if found != expected:
            raise FrameLengthError(
                f"channel LLR lengths {found} do not match codec {expected}"
            )

    def decode(
        self,
        channel: ChannelLlrs,
        reference: Optional[np.ndarray] = None,
        trace: Optional[Callable[[IterationSnapshot], None]] = None,
    ) -> DecodeResult:
        config = self.config
        self._check_lengths(channel)
        if config.stop_rule == "genie" and reference is None:
            raise ValueError("genie stopping needs the transmitted bits")

        repetition = self.repetition
        degree = repetition.degree_of
        systematic = np.asarray(channel.systematic, dtype=np.float64)

        repeated = systematic[repetition.layout_source]
        # scaled: each copy carries 1/d of the channel LLR and the other copies'
        # shares travel with its a priori, so the SISO input still sums to L_c
        channel_share = np.zeros(repetition.repeated_length)
        if config.channel_llr_mode == "scaled":
            copy_degree = degree[repetition.layout_source]
            channel_share = repeated * (copy_degree - 1) / copy_degree
            repeated = repeated / copy_degree
        final_weight = degree if config.final_channel_weight == "per_copy" else 1

        sys_in = interleave.apply(self.permutation, repeated)
        parity_in = depuncture(
            channel.parity, config.pattern, repetition.repeated_length
        )
        tail_sys, tail_par = channel.tail[:MEMORY], channel.tail[MEMORY:]
        apriori = interleave.apply(self.permutation, channel_share)

        previous = (systematic < 0).astype(np.int8)
        debug = logger.isEnabledFor(logging.DEBUG)
        converged = False
        app_total = systematic.copy()
        decisions = previous

        iteration = 0
        for iteration in range(1, config.max_iterations + 1):
            out = log_map_decode(
                SisoInput(sys_in, parity_in, apriori, tail_sys, tail_par),
                self.trellis,
                exact=config.exact_log_map,
            )
            extrinsic = interleave.invert_apply(self.permutation, out.extrinsic)
            next_apriori, totals = extrinsic_combine(extrinsic, repetition)
            if debug:
                self._check_conservation(next_apriori, totals)

            app_total = systematic * final_weight + totals
            decisions = (app_total < 0).astype(np.int8)
            if trace is not None:
                trace(
                    IterationSnapshot(
                        iteration=iteration,
                        extrinsic=extrinsic,
                        next_apriori=next_apriori,
                        app_total=app_total,
                        decisions=decisions,
                    )
                )

            stable = bool(np.array_equal(decisions, previous) and np.all(app_total != 0))
            if config.stop_rule == "genie" and np.array_equal(decisions, reference):
                converged = True
                break
            if config.stop_rule == "stable-decisions" and stable:
                converged = True
                break
            if config.stop_rule == "fixed":
                converged = stable
            previous = decisions
            apriori = interleave.apply(self.permutation, next_apriori + channel_share)

        logger.debug(f"Decoded frame in {iteration} passes, converged={converged}")
        return DecodeResult(
            decisions=decisions,
            iterations_used=iteration,
            converged=converged,
            final_app=app_total,
            regular=config.profile.is_regular,
        )

    def _check_conservation(self, next_apriori, totals) -> None:
        degree = self.repetition.degree_of
        new_sums = np.bincount(
            self.repetition.layout_source,
            weights=next_apriori,
            minlength=self.repetition.source_count,
        )
        if not np.allclose(new_sums, (degree - 1) * totals, atol=1e-9):
            raise RuntimeError("extrinsic combination broke the (d-1) sum identity")


@lru_cache(maxsize=8)
def codec_for(config: CodecConfig) -> IrregularTurboCodec:
    return IrregularTurboCodec(config)


def encode(bits: np.ndarray, config: CodecConfig) -> EncodedFrame:
    return codec_for(config).encode(bits)


def decode(
    channel: ChannelLlrs,
    config: CodecConfig,
    reference: Optional[np.ndarray] = None,
) -> DecodeResult:
    return codec_for(config).decode(channel, reference=reference)
