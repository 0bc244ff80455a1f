"""The 8-state UMTS recursive systematic convolutional constituent.

Feedback polynomial 13 (octal, 1 + D^2 + D^3), forward polynomial 15
(octal, 1 + D + D^3). With register contents a_{k-1}, a_{k-2}, a_{k-3}:

    a_k = u_k ^ a_{k-2} ^ a_{k-3}
    p_k = a_k ^ a_{k-1} ^ a_{k-3}

State numbering: state = a_{k-1} | a_{k-2} << 1 | a_{k-3} << 2 (most recent
register bit in the low position).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence

import networkx as nx
import numpy as np
from numba import njit

logger = logging.getLogger(__name__)

STATE_COUNT = 8
MEMORY = 3


@dataclass(frozen=True)
class Trellis:
    next_state: np.ndarray
    parity_out: np.ndarray
    termination_input: np.ndarray

    @property
    def state_count(self) -> int:
        return int(self.next_state.shape[0])


@dataclass(frozen=True)
class RscOutput:
    parity: np.ndarray
    tail_systematic: np.ndarray
    tail_parity: np.ndarray
    final_state: int


def _state_graph(next_state: np.ndarray) -> nx.DiGraph:
    graph = nx.DiGraph()
    for state in range(next_state.shape[0]):
        for bit in (0, 1):
            graph.add_edge(state, int(next_state[state, bit]), input=bit)
    return graph


@lru_cache(maxsize=1)
def build_trellis() -> Trellis:
    next_state = np.zeros((STATE_COUNT, 2), dtype=np.int64)
    parity_out = np.zeros((STATE_COUNT, 2), dtype=np.int64)
    termination_input = np.zeros(STATE_COUNT, dtype=np.int64)

    for state in range(STATE_COUNT):
        a1, a2, a3 = state & 1, (state >> 1) & 1, (state >> 2) & 1
        for bit in (0, 1):
            a0 = bit ^ a2 ^ a3
            next_state[state, bit] = a0 | (a1 << 1) | (a2 << 2)
            parity_out[state, bit] = a0 ^ a1 ^ a3
        termination_input[state] = a2 ^ a3

    if not nx.is_strongly_connected(_state_graph(next_state)):
        raise RuntimeError("RSC trellis has unreachable states")
    for start in range(STATE_COUNT):
        state = start
        for _ in range(MEMORY):
            state = next_state[state, termination_input[state]]
        if state != 0:
            raise RuntimeError(f"termination from state {start} ends in {state}")

    return Trellis(
        next_state=next_state,
        parity_out=parity_out,
        termination_input=termination_input,
    )


@njit(cache=True)
def _walk(bits, next_state, parity_out):
    parity = np.empty(bits.size, dtype=np.int8)
    state = 0
    for k in range(bits.size):
        u = bits[k]
        parity[k] = parity_out[state, u]
        state = next_state[state, u]
    return parity, state


def encode(bits: np.ndarray, trellis: Trellis) -> RscOutput:
    """Encode from state 0, then drive the register back to 0 in 3 tail steps."""
    bits = np.ascontiguousarray(bits, dtype=np.int64)
    parity, state = _walk(bits, trellis.next_state, trellis.parity_out)

    tail_systematic = np.empty(MEMORY, dtype=np.int8)
    tail_parity = np.empty(MEMORY, dtype=np.int8)
    for step in range(MEMORY):
        u = int(trellis.termination_input[state])
        tail_systematic[step] = u
        tail_parity[step] = trellis.parity_out[state, u]
        state = int(trellis.next_state[state, u])

    return RscOutput(
        parity=parity,
        tail_systematic=tail_systematic,
        tail_parity=tail_parity,
        final_state=int(state),
    )


def reference_parity(bits: Sequence[int]) -> List[int]:
    """Shift-register evaluation of the recursion, independent of the tables."""
    register = [0, 0, 0]
    parity = []
    for u in bits:
        a0 = int(u) ^ register[1] ^ register[2]
        parity.append(a0 ^ register[0] ^ register[2])
        register = [a0, register[0], register[1]]
    return parity
