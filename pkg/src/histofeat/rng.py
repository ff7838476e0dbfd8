"""Deterministic 64-bit random streams.

All randomness in this package flows through SplitMix64 so that runs are
reproducible bit-for-bit from a single master seed, independent of Python
hash randomization, platform, or thread count.

SplitMix64 (Steele, Lea & Flood's mixer, as used by java.util.SplittableRandom):
the state advances by the golden-ratio increment 0x9E3779B97F4A7C15 per draw
and each output is the finalizing mix

    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all modulo 2**64.

Sub-streams are derived, not split off sequentially: ``derive(master, key)``
mixes the master seed with the FNV-1a hash of a string key (e.g. a class
label, or ``"tree/17"``), so every consumer owns an independent stream whose
seed is a pure function of (master seed, key).  Bounded integers use
rejection sampling on the top range multiple of the bound, which is exact
(no modulo bias).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def fnv1a(key: str) -> int:
    """FNV-1a 64-bit hash of a UTF-8 string."""
    h = _FNV_OFFSET
    for byte in key.encode("utf-8"):
        h = (h ^ byte) * _FNV_PRIME & _MASK
    return h


def derive_seed(master: int, key: str) -> int:
    """Seed of the sub-stream identified by `key` under `master`."""
    return _mix(master & _MASK ^ fnv1a(key))


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return _mix(self.state)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling; exact, no bias."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (descending index form)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bounded_array(self, n: int, bound: int) -> np.ndarray:
        """n uniform integers in [0, bound), vectorized.

        Uses the closed form state_i = state + i*gamma to generate a batch in
        one shot; rejected draws (top-range bias region) are refilled from the
        stream's continuation, so the result equals n sequential randrange
        calls in distribution and is deterministic for a given state.
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) - ((1 << 64) % bound)
        out = np.empty(n, dtype=np.int64)
        filled = 0
        while filled < n:
            need = n - filled
            start = np.uint64(self.state)
            steps = np.arange(1, need + 1, dtype=np.uint64)
            with np.errstate(over="ignore"):
                z = start + steps * np.uint64(_GAMMA)
                z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
                z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
                z = z ^ (z >> np.uint64(31))
            self.state = (self.state + need * _GAMMA) & _MASK
            # threshold == 2**64 (bound divides the range) accepts everything.
            accepted = z if threshold > _MASK else z[z < np.uint64(threshold)]
            take = accepted[:need]
            out[filled : filled + take.size] = (take % np.uint64(bound)).astype(np.int64)
            filled += take.size
        return out
