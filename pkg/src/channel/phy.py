"""Gray-mapped BPSK/QPSK/16QAM/64QAM, AWGN and exact per-bit LLR demapping.

Square constellations are the Cartesian product of two Gray PAM axes: the
first half of a symbol's label bits selects the in-phase level, the second
half the quadrature level. On every axis the label's first bit is the sign
(0 -> positive), so BPSK maps bit 0 to +1 in line with the LLR convention.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import logsumexp

logger = logging.getLogger(__name__)

MODULATION_ORDERS: Dict[str, int] = {"bpsk": 2, "qpsk": 4, "16qam": 16, "64qam": 64}


def gray_code(bits: int) -> np.ndarray:
    index = np.arange(1 << bits)
    return index ^ (index >> 1)


@dataclass(frozen=True)
class Constellation:
    order: int
    points: np.ndarray
    labels: np.ndarray
    axis_levels: np.ndarray
    axis_labels: np.ndarray
    scale: float

    @property
    def bits_per_symbol(self) -> int:
        return int(self.labels.shape[1])

    @property
    def bits_per_axis(self) -> int:
        return int(self.axis_labels.shape[1])

    @property
    def real_only(self) -> bool:
        return self.order == 2


def _gray_pam(bits: int) -> Tuple[np.ndarray, np.ndarray]:
    """Levels from most positive to most negative, labelled by the Gray sequence."""
    size = 1 << bits
    levels = (size - 1) - 2.0 * np.arange(size)
    codes = gray_code(bits)
    labels = (codes[:, None] >> np.arange(bits - 1, -1, -1)) & 1
    return levels, labels.astype(np.int8)


@lru_cache(maxsize=None)
def constellation(modulation: Union[str, int]) -> Constellation:
    order = MODULATION_ORDERS[modulation] if isinstance(modulation, str) else modulation
    if order not in MODULATION_ORDERS.values():
        raise ValueError(f"unsupported modulation order {order}")

    bits = int(math.log2(order))
    axis_bits = 1 if order == 2 else bits // 2
    levels, axis_labels = _gray_pam(axis_bits)

    if order == 2:
        scale = 1.0
        points = levels.astype(np.complex128)
        labels = axis_labels
    else:
        scale = math.sqrt(2.0 * np.mean(levels**2))
        i_index, q_index = np.divmod(np.arange(order), levels.size)
        points = (levels[i_index] + 1j * levels[q_index]) / scale
        labels = np.hstack((axis_labels[i_index], axis_labels[q_index]))

    return Constellation(
        order=order,
        points=points,
        labels=labels,
        axis_levels=levels / scale,
        axis_labels=axis_labels,
        scale=scale,
    )


class ChannelParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    ebno_db: float = Field(allow_inf_nan=False)
    rate: float = Field(gt=0)
    bits_per_symbol: int = Field(ge=1)

    @model_validator(mode="after")
    def _usable_noise(self):
        sigma2 = self.sigma2
        if not 0.0 < sigma2 < math.inf:
            raise ValueError(
                f"Eb/N0 {self.ebno_db} dB gives noise variance {sigma2}, outside (0, inf)"
            )
        return self

    @property
    def sigma2(self) -> float:
        """Noise variance per real dimension for unit-energy symbols."""
        try:
            inverse_ebno = 10.0 ** (-self.ebno_db / 10.0)
        except OverflowError:
            return math.inf
        return inverse_ebno / (2.0 * self.rate * self.bits_per_symbol)


def noise_sigma(params: ChannelParams) -> float:
    return params.sigma2


def map_bits(bits: np.ndarray, const: Constellation) -> Tuple[np.ndarray, int]:
    """Map bits to symbols in stream order; returns (symbols, pad bit count)."""
    bits = np.asarray(bits, dtype=np.int64)
    m = const.bits_per_symbol
    pad = (-bits.size) % m
    grouped = np.concatenate((bits, np.zeros(pad, dtype=np.int64))).reshape(-1, m)

    axis_bits = const.bits_per_axis
    weights = 1 << np.arange(axis_bits - 1, -1, -1)
    # axis label value -> level position along the Gray sequence
    level_of_code = np.argsort(gray_code(axis_bits))
    i_code = grouped[:, :axis_bits] @ weights
    in_phase = const.axis_levels[level_of_code[i_code]]
    if const.real_only:
        return in_phase.astype(np.complex128), pad
    q_code = grouped[:, axis_bits:] @ weights
    quadrature = const.axis_levels[level_of_code[q_code]]
    return in_phase + 1j * quadrature, pad


def awgn(
    symbols: np.ndarray,
    sigma2: float,
    rng: np.random.Generator,
    real_only: bool = False,
) -> np.ndarray:
    """Add zero-mean Gaussian noise of variance sigma2 per real dimension."""
    if sigma2 < 0:
        raise ValueError(f"noise variance must be >= 0, got {sigma2}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    if sigma2 == 0:
        return symbols.copy()
    sigma = math.sqrt(sigma2)
    noise = rng.normal(0.0, sigma, symbols.shape)
    if not real_only:
        noise = noise + 1j * rng.normal(0.0, sigma, symbols.shape)
    return symbols + noise


def _axis_llrs(
    received: np.ndarray, const: Constellation, sigma2: float, exact: bool
) -> np.ndarray:
    metrics = -((received[:, None] - const.axis_levels[None, :]) ** 2) / (2.0 * sigma2)
    llrs = np.empty((received.size, const.bits_per_axis))
    for bit in range(const.bits_per_axis):
        zero = const.axis_labels[:, bit] == 0
        if exact:
            llrs[:, bit] = logsumexp(metrics[:, zero], axis=1) - logsumexp(
                metrics[:, ~zero], axis=1
            )
        else:
            llrs[:, bit] = metrics[:, zero].max(axis=1) - metrics[:, ~zero].max(axis=1)
    return llrs


def demap(
    received: np.ndarray,
    const: Constellation,
    sigma2: float,
    exact: bool = True,
) -> np.ndarray:
    """Per-bit LLRs ln P(0)/P(1), computed per real axis of the Gray square grid."""
    if sigma2 <= 0:
        raise ValueError(f"demapping needs sigma2 > 0, got {sigma2}")
    received = np.asarray(received, dtype=np.complex128)
    in_phase = _axis_llrs(received.real, const, sigma2, exact)
    if const.real_only:
        return in_phase.reshape(-1)
    quadrature = _axis_llrs(received.imag, const, sigma2, exact)
    return np.hstack((in_phase, quadrature)).reshape(-1)
