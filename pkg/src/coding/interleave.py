"""Seeded random interleaver.

Convention: ``forward[i]`` is the output position of input ``i``.

Tables are produced by a Fisher-Yates shuffle driven by the raw 64-bit output
stream of numpy's PCG64 bit generator (a fixed, documented algorithm), with
multiply-shift range reduction, so a (seed, N) pair gives the same table on
every platform and numpy release.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import FrameLengthError, InterleaverError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64


@dataclass(frozen=True)
class Permutation:
    forward: np.ndarray
    seed: int
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        inverse = np.empty_like(self.forward)
        inverse[self.forward] = np.arange(self.forward.size, dtype=self.forward.dtype)
        object.__setattr__(self, "inverse", inverse)

    @property
    def size(self) -> int:
        return int(self.forward.size)

    def is_bijection(self) -> bool:
        return bool(np.array_equal(np.sort(self.forward), np.arange(self.size)))

    def dump(self, path: Union[str, Path]) -> None:
        """Write the "N=<size> seed=<seed>" header followed by one index per line."""
        lines = [f"N={self.size} seed={self.seed}"]
        lines.extend(str(int(index)) for index in self.forward)
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Permutation":
        try:
            header, *body = Path(path).read_text().splitlines()
            fields = dict(part.split("=", 1) for part in header.split())
            size, seed = int(fields["N"]), int(fields["seed"])
            forward = np.array(
                [int(line) for line in body if line.strip()], dtype=np.int64
            )
        except (KeyError, ValueError) as e:
            raise InterleaverError(f"malformed permutation dump {path}: {e}") from None
        if forward.size != size:
            raise InterleaverError(f"dump header says N={size}, found {forward.size} rows")
        if not np.array_equal(np.sort(forward), np.arange(size)):
            raise InterleaverError(f"dump {path} is not a permutation")
        return cls(forward=forward, seed=seed)


def generate(seed: int, size: int) -> Permutation:
    if size < 1:
        raise InterleaverError(f"interleaver size must be >= 1, got {size}")
    if not 0 <= seed < SEED_LIMIT:
        raise InterleaverError(f"seed {seed} is not a 64-bit unsigned value")

    draws = np.random.PCG64(seed).random_raw(size)
    table = list(range(size))
    for step, i in enumerate(range(size - 1, 0, -1)):
        j = (int(draws[step]) * (i + 1)) >> 64
        table[i], table[j] = table[j], table[i]

    logger.debug(f"Generated interleaver N={size} seed={seed}")
    return Permutation(forward=np.array(table, dtype=np.int64), seed=seed)


def apply(permutation: Permutation, sequence: np.ndarray) -> np.ndarray:
    sequence = np.asarray(sequence)
    if sequence.size != permutation.size:
        raise FrameLengthError(
            f"sequence length {sequence.size} != interleaver size {permutation.size}"
        )
    out = np.empty_like(sequence)
    out[permutation.forward] = sequence
    return out


def invert_apply(permutation: Permutation, sequence: np.ndarray) -> np.ndarray:
    sequence = np.asarray(sequence)
    if sequence.size != permutation.size:
        raise FrameLengthError(
            f"sequence length {sequence.size} != interleaver size {permutation.size}"
        )
    return sequence[permutation.forward]
