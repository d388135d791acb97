"""Seeded pseudo-random streams shared by every stochastic component.

Dataset generation, weight initialisation and mini-batch shuffling all
draw from the generator below instead of ``random`` or ``numpy.random``,
so any dataset or training run is reproducible bit-for-bit from a single
integer seed, independently of platform and library versions.  The
stream is xoshiro256** seeded through splitmix64.  Work that could be
parallelised (one moving-crop sequence, one training run) gets its own
child stream via :func:`derive_seed`, so results do not depend on the
order in which items are produced.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 increment


def _mix64(x: int) -> int:
    """splitmix64 finaliser; avalanches a 64-bit word."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Child seed for stream ``index``, independent of other indices."""
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    return _mix64((seed + (index + 1) * _GAMMA) & _MASK)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Rng:
    """xoshiro256** stream exposing the few draw kinds the package needs."""

    def __init__(self, seed: int):
        state = seed & _MASK
        s = []
        for _ in range(4):
            state = (state + _GAMMA) & _MASK
            s.append(_mix64(state))
        if not any(s):  # all-zero state is the one invalid xoshiro state
            s[0] = _GAMMA
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        out = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return out

    def uniform(self) -> float:
        """Uniform float64 in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.uniform()

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n); modulo bias is below n / 2**64."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

    def uniform_matrix(self, rows: int, cols: int, lo: float, hi: float) -> np.ndarray:
        """(rows, cols) array of uniform draws in [lo, hi), filled row-major."""
        flat = np.empty(rows * cols)
        for k in range(rows * cols):
            flat[k] = self.uniform()
        return lo + (hi - lo) * flat.reshape(rows, cols)
