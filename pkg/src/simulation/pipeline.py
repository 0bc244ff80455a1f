"""
Per-frame Monte Carlo pipeline as a LangGraph workflow.

source -> encode -> modulate -> channel -> demap -> decode -> count, with the
codec stages bypassed in uncoded mode.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, TypedDict

import numpy as np
from langgraph.graph import END, StateGraph

from ..channel.phy import ChannelParams, awgn, constellation, demap, map_bits
from ..coding.codec import IrregularTurboCodec, codec_for
from .config import SimConfig

logger = logging.getLogger(__name__)


class FrameState(TypedDict):
    """State that flows through the frame steps."""
    ebno_db: float
    rng: np.random.Generator
    bits: Optional[np.ndarray]
    transmitted: Optional[np.ndarray]
    symbols: Optional[np.ndarray]
    pad: int
    received: Optional[np.ndarray]
    llrs: Optional[np.ndarray]
    decisions: Optional[np.ndarray]
    passes: int
    bit_errors: int
    frame_error: bool


@dataclass(frozen=True)
class FrameOutcome:
    bit_errors: int
    frame_error: bool
    passes: int


def frame_rng(master_seed: int, ebno_index: int, frame_index: int) -> np.random.Generator:
    """Independent stream for one frame, derived from the master seed."""
    seed = np.random.SeedSequence(master_seed, spawn_key=(ebno_index, frame_index))
    return np.random.default_rng(seed)


class FramePipeline:
    """Simulates single frames of one SimConfig."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.const = constellation(config.modulation)
        self.codec: Optional[IrregularTurboCodec] = None
        if not config.uncoded:
            self.codec = codec_for(config.codec)
        self.workflow = self._create_workflow()

    @property
    def nominal_rate(self) -> float:
        return 1.0 if self.codec is None else self.config.codec.nominal_rate

    @property
    def measured_rate(self) -> float:
        return 1.0 if self.codec is None else self.codec.measured_rate

    @property
    def energy_rate(self) -> float:
        """Rate used to convert Eb/N0 into noise variance."""
        if self.config.rate_basis == "measured":
            return self.measured_rate
        return self.nominal_rate

    def sigma2(self, ebno_db: float) -> float:
        params = ChannelParams(
            ebno_db=ebno_db,
            rate=self.energy_rate,
            bits_per_symbol=self.const.bits_per_symbol,
        )
        return params.sigma2

    def _create_workflow(self) -> Any:
        workflow = StateGraph(FrameState)
        workflow.add_node("source", self.draw_source)
        workflow.add_node("encode", self.encode_frame)
        workflow.add_node("modulate", self.modulate)
        workflow.add_node("channel", self.add_noise)
        workflow.add_node("demap", self.demap_llrs)
        workflow.add_node("decode", self.decode_frame)
        workflow.add_node("count", self.count_errors)
        workflow.add_conditional_edges(
            "source", self._route_coded, {"coded": "encode", "uncoded": "modulate"}
        )
        workflow.add_edge("encode", "modulate")
        workflow.add_edge("modulate", "channel")
        workflow.add_edge("channel", "demap")
        workflow.add_conditional_edges(
            "demap", self._route_coded, {"coded": "decode", "uncoded": "count"}
        )
        workflow.add_edge("decode", "count")
        workflow.add_edge("count", END)
        workflow.set_entry_point("source")
        return workflow.compile()

    def _route_coded(self, state: FrameState) -> str:
        return "uncoded" if self.codec is None else "coded"

    def draw_source(self, state: FrameState) -> FrameState:
        bits = state["rng"].integers(0, 2, self.config.codec.frame_size, dtype=np.int8)
        state["bits"] = bits
        state["transmitted"] = bits
        return state

    def encode_frame(self, state: FrameState) -> FrameState:
        state["transmitted"] = self.codec.encode(state["bits"]).bits()
        return state

    def modulate(self, state: FrameState) -> FrameState:
        symbols, pad = map_bits(state["transmitted"], self.const)
        state["symbols"] = symbols
        state["pad"] = pad
        return state

    def add_noise(self, state: FrameState) -> FrameState:
        state["received"] = awgn(
            state["symbols"],
            self.sigma2(state["ebno_db"]),
            state["rng"],
            real_only=self.const.real_only,
        )
        return state

    def demap_llrs(self, state: FrameState) -> FrameState:
        llrs = demap(
            state["received"],
            self.const,
            self.sigma2(state["ebno_db"]),
            exact=self.config.exact_demap,
        )
        state["llrs"] = llrs[: llrs.size - state["pad"]]
        return state

    def decode_frame(self, state: FrameState) -> FrameState:
        reference = state["bits"] if self.config.codec.stop_rule == "genie" else None
        result = self.codec.decode(self.codec.split(state["llrs"]), reference=reference)
        state["decisions"] = result.decisions
        state["passes"] = result.iterations_used
        return state

    def count_errors(self, state: FrameState) -> FrameState:
        decisions = state.get("decisions")
        if decisions is None:
            decisions = (state["llrs"] < 0).astype(np.int8)
        errors = int(np.count_nonzero(decisions != state["bits"]))
        state["bit_errors"] = errors
        state["frame_error"] = errors > 0
        return state

    def run_frame(self, ebno_db: float, ebno_index: int, frame_index: int) -> FrameOutcome:
        """Run one frame through the workflow."""
        initial_state = FrameState(
            ebno_db=ebno_db,
            rng=frame_rng(self.config.master_seed, ebno_index, frame_index),
            bits=None,
            transmitted=None,
            symbols=None,
            pad=0,
            received=None,
            llrs=None,
            decisions=None,
            passes=0,
            bit_errors=0,
            frame_error=False,
        )
        final_state = self.workflow.invoke(initial_state)
        return FrameOutcome(
            bit_errors=final_state["bit_errors"],
            frame_error=final_state["frame_error"],
            passes=final_state["passes"],
        )
