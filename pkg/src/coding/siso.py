"""Log-MAP (BCJR) soft-input soft-output decoder for the terminated RSC.

LLR convention: L = ln(P(bit=0) / P(bit=1)); bit 0 is the +1 symbol.
Branch metric for input u and parity p at step k:

    gamma = 0.5 * (x_u * (Ls + La) + x_p * Lp),  x_b = 1 - 2b

so that app = Ls + La + extrinsic holds by construction.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import logsumexp

from .errors import FrameLengthError
from .rsc import MEMORY, Trellis

logger = logging.getLogger(__name__)

L_MAX = 50.0
NEG_INF = -1e9
_UNREACHABLE = NEG_INF / 2
ORACLE_MAX_LENGTH = 20


@dataclass(frozen=True)
class SisoInput:
    systematic: np.ndarray
    parity: np.ndarray
    apriori: np.ndarray
    tail_systematic: np.ndarray
    tail_parity: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.systematic).size
        if np.asarray(self.parity).size != n or np.asarray(self.apriori).size != n:
            raise FrameLengthError(
                f"SISO inputs differ in length: systematic {n}, "
                f"parity {np.asarray(self.parity).size}, "
                f"apriori {np.asarray(self.apriori).size}"
            )
        for name in ("tail_systematic", "tail_parity"):
            if np.asarray(getattr(self, name)).size != MEMORY:
                raise FrameLengthError(f"{name} must hold {MEMORY} LLRs")

    @property
    def length(self) -> int:
        return int(np.asarray(self.systematic).size)


@dataclass(frozen=True)
class SisoOutput:
    extrinsic: np.ndarray
    app: np.ndarray


def clamp(llrs: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(llrs, dtype=np.float64), -L_MAX, L_MAX)


def max_star(a: float, b: float, exact: bool = True) -> float:
    """Jacobian logarithm ln(e^a + e^b); drops the correction term when not exact."""
    if a < b:
        a, b = b, a
    if b <= NEG_INF or not exact:
        return a
    return a + math.log1p(math.exp(b - a))


@njit(cache=True)
def _max_star(a, b, exact):
    if a < b:
        a, b = b, a
    if b <= NEG_INF or not exact:
        return a
    return a + math.log1p(math.exp(b - a))


@njit(cache=True)
def _normalize(row):
    top = row.max()
    for s in range(row.size):
        row[s] -= top


@njit(cache=True)
def _branch_inputs(k, n, sys, par, apr, tail_sys, tail_par):
    if k < n:
        return sys[k] + apr[k], par[k]
    return tail_sys[k - n], tail_par[k - n]


@njit(cache=True)
def _log_map(sys, par, apr, tail_sys, tail_par, next_state, parity_out, term, exact):
    n = sys.size
    total = n + tail_sys.size
    states = next_state.shape[0]
    alpha = np.full((total + 1, states), NEG_INF)
    beta = np.full((total + 1, states), NEG_INF)
    alpha[0, 0] = 0.0
    beta[total, 0] = 0.0

    for k in range(total):
        ls, lp = _branch_inputs(k, n, sys, par, apr, tail_sys, tail_par)
        for s in range(states):
            a = alpha[k, s]
            if a <= _UNREACHABLE:
                continue
            for u in range(2):
                if k >= n and u != term[s]:
                    continue
                gamma = 0.5 * ((1 - 2 * u) * ls + (1 - 2 * parity_out[s, u]) * lp)
                ns = next_state[s, u]
                alpha[k + 1, ns] = _max_star(alpha[k + 1, ns], a + gamma, exact)
        _normalize(alpha[k + 1])

    for k in range(total - 1, -1, -1):
        ls, lp = _branch_inputs(k, n, sys, par, apr, tail_sys, tail_par)
        for s in range(states):
            acc = NEG_INF
            for u in range(2):
                if k >= n and u != term[s]:
                    continue
                b = beta[k + 1, next_state[s, u]]
                if b <= _UNREACHABLE:
                    continue
                gamma = 0.5 * ((1 - 2 * u) * ls + (1 - 2 * parity_out[s, u]) * lp)
                acc = _max_star(acc, gamma + b, exact)
            beta[k, s] = acc
        _normalize(beta[k])

    app = np.empty(n)
    for k in range(n):
        ls, lp = _branch_inputs(k, n, sys, par, apr, tail_sys, tail_par)
        num0 = NEG_INF
        num1 = NEG_INF
        for s in range(states):
            a = alpha[k, s]
            if a <= _UNREACHABLE:
                continue
            for u in range(2):
                b = beta[k + 1, next_state[s, u]]
                if b <= _UNREACHABLE:
                    continue
                gamma = 0.5 * ((1 - 2 * u) * ls + (1 - 2 * parity_out[s, u]) * lp)
                if u == 0:
                    num0 = _max_star(num0, a + gamma + b, exact)
                else:
                    num1 = _max_star(num1, a + gamma + b, exact)
        app[k] = num0 - num1
    return app


def log_map_decode(inp: SisoInput, trellis: Trellis, exact: bool = True) -> SisoOutput:
    """One forward/backward pass over the terminated trellis.

    Extrinsic values are clamped to +/-L_MAX; app is then reported as the exact
    sum systematic + apriori + extrinsic of the clamped terms.
    """
    systematic = clamp(inp.systematic)
    apriori = clamp(inp.apriori)
    app = _log_map(
        systematic,
        clamp(inp.parity),
        apriori,
        clamp(inp.tail_systematic),
        clamp(inp.tail_parity),
        trellis.next_state,
        trellis.parity_out,
        trellis.termination_input,
        exact,
    )
    extrinsic = clamp(app - systematic - apriori)
    return SisoOutput(extrinsic=extrinsic, app=systematic + apriori + extrinsic)


def exhaustive_app(inp: SisoInput, trellis: Trellis) -> np.ndarray:
    """Per-position app LLRs by summing over every input word of the section.

    Brute-force MAP oracle for short sections; cost grows as 2^length.
    """
    n = inp.length
    if n > ORACLE_MAX_LENGTH:
        raise FrameLengthError(f"exhaustive oracle limited to {ORACLE_MAX_LENGTH} bits")
    systematic = clamp(inp.systematic) + clamp(inp.apriori)
    parity = clamp(inp.parity)
    tail_sys, tail_par = clamp(inp.tail_systematic), clamp(inp.tail_parity)

    # every input word walks the trellis at once; word bit k is input step k
    words = np.arange(2**n, dtype=np.int64)
    states = np.zeros(words.size, dtype=np.int64)
    metrics = np.zeros(words.size)
    for k in range(n):
        u = (words >> k) & 1
        p = trellis.parity_out[states, u]
        metrics += 0.5 * ((1 - 2 * u) * systematic[k] + (1 - 2 * p) * parity[k])
        states = trellis.next_state[states, u]
    for step in range(MEMORY):
        u = trellis.termination_input[states]
        p = trellis.parity_out[states, u]
        metrics += 0.5 * ((1 - 2 * u) * tail_sys[step] + (1 - 2 * p) * tail_par[step])
        states = trellis.next_state[states, u]

    app = np.empty(n)
    for k in range(n):
        zero = ((words >> k) & 1) == 0
        app[k] = logsumexp(metrics[zero]) - logsumexp(metrics[~zero])
    return app
