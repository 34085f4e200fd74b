"""Seeded xoshiro256** streams shared by the Python and numba code paths.

A stream is identified by ``(seed, stream)``. The four state words come from
splitmix64: the seed is hashed once, xor-ed with an odd multiple of
``stream + 1``, and the result seeds four more splitmix64 outputs. Every
sampler in the package derives per-trial streams this way, so a run is a pure
function of its seed.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_MULT = 0xD1B54A32D192ED03

_U1 = np.uint64(1)
_U7 = np.uint64(7)
_U11 = np.uint64(11)
_U17 = np.uint64(17)
_U45 = np.uint64(45)
_U5 = np.uint64(5)
_U9 = np.uint64(9)
_U64 = np.uint64(64)


def splitmix64(x: int) -> tuple[int, int]:
    """One splitmix64 step on Python ints. Returns ``(new_state, output)``."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def seed_state(seed: int, stream: int = 0) -> np.ndarray:
    """Four-word xoshiro256** state for the given seed and stream index."""
    _, h = splitmix64(seed & MASK64)
    x = h ^ (((stream + 1) * _STREAM_MULT) & MASK64)
    words = []
    for _ in range(4):
        x, out = splitmix64(x)
        words.append(out)
    if not any(words):
        words[0] = 1
    return np.array(words, dtype=np.uint64)


@njit(cache=True)
def _rotl(x, k):
    return (x << k) | (x >> (_U64 - k))


@njit(cache=True)
def next_u64(s):
    """Advance the state array in place and return the next 64-bit output."""
    result = _rotl(s[1] * _U5, _U7) * _U9
    t = s[1] << _U17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], _U45)
    return result


@njit(cache=True)
def below(s, n):
    """Uniform integer in ``[0, n)`` for ``n >= 1`` by masked rejection on the top bits."""
    if n <= 1:
        return 0
    bits = 0
    m = n - 1
    while m > 0:
        bits += 1
        m >>= 1
    shift = np.uint64(64 - bits)
    while True:
        r = np.int64(next_u64(s) >> shift)
        if r < n:
            return r


@njit(cache=True)
def uniform01(s):
    """Uniform double in ``[0, 1)`` from the top 53 bits."""
    return np.float64(next_u64(s) >> _U11) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def shuffle_inplace(s, arr):
    for i in range(arr.shape[0] - 1, 0, -1):
        j = below(s, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


class Rng:
    """Thin stateful wrapper over one xoshiro256** stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int, stream: int = 0) -> None:
        self.state = seed_state(seed, stream)

    @classmethod
    def from_state(cls, words) -> Rng:
        obj = cls.__new__(cls)
        obj.state = np.array([int(w) & MASK64 for w in words], dtype=np.uint64)
        return obj

    def next_u64(self) -> int:
        return int(next_u64(self.state))

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be positive")
        return int(below(self.state, n))

    def random(self) -> float:
        return float(uniform01(self.state))

    def shuffle(self, arr: np.ndarray) -> None:
        shuffle_inplace(self.state, arr)


def derive_seed(seed: int, *indices: int) -> int:
    """Fold integer indices into a seed (used to give grid points their own seeds)."""
    x = seed & MASK64
    for i in indices:
        _, h = splitmix64(x ^ ((i * _STREAM_MULT) & MASK64))
        x = h
    return x
