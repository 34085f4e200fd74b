"""Random graph generators: G(n,m), planar graphs by rejection, cubic pairing model."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np
from numba import njit

from .multigraph import Multigraph, is_connected
from .planarity import is_planar
from .rng import Rng, below, shuffle_inplace

DEFAULT_MAX_TRIES = 10_000


class SamplerExhausted(RuntimeError):
    """Rejection loop gave up; ``tries`` records how many candidates were drawn."""

    def __init__(self, tries: int, what: str = "sample"):
        super().__init__(f"no accepted {what} after {tries} tries")
        self.tries = tries


@njit(cache=True)
def _floyd_subset(state, total, m):
    """Uniform m-subset of ``0..total-1`` (Floyd's algorithm), returned sorted."""
    chosen = set()
    for j in range(total - m, total):
        t = below(state, j + 1)
        if t in chosen:
            chosen.add(j)
        else:
            chosen.add(t)
    out = np.empty(m, dtype=np.int64)
    i = 0
    for x in chosen:
        out[i] = x
        i += 1
    out.sort()
    return out


@njit(cache=True)
def _decode_pairs(idx, n):
    """Map lexicographic indices of pairs ``u < v`` (1-based vertices) to endpoints."""
    out = np.empty((idx.shape[0], 2), dtype=np.int64)
    u = 1
    base = 0
    for i in range(idx.shape[0]):
        x = idx[i]
        while x >= base + (n - u):
            base += n - u
            u += 1
        out[i, 0] = u
        out[i, 1] = u + 1 + (x - base)
    return out


def gnm_sample(n: int, m: int, seed: int, trial: int = 0) -> Multigraph:
    """Uniform simple graph on ``1..n`` with exactly ``m`` edges, edges in lexicographic order."""
    total = comb(n, 2)
    if not 0 <= m <= total:
        raise ValueError(f"m={m} outside 0..{total}")
    if m == 0:
        return Multigraph(n)
    rng = Rng(seed, trial)
    pairs = _decode_pairs(_floyd_subset(rng.state, total, m), n)
    return Multigraph.from_edges(n, [(int(u), int(v)) for u, v in pairs])


@dataclass(frozen=True)
class RejectionResult:
    graph: Multigraph
    tries: int

    @property
    def acceptance(self) -> float:
        return 1.0 / self.tries


def planar_rejection_sample(n: int, m: int, seed: int, max_tries: int = DEFAULT_MAX_TRIES) -> RejectionResult:
    """First planar draw of :func:`gnm_sample`; try ``t`` uses stream ``(seed, t)``."""
    for t in range(max_tries):
        g = gnm_sample(n, m, seed, t)
        if is_planar(g):
            return RejectionResult(g, t + 1)
    raise SamplerExhausted(max_tries, "planar graph")


def _passes(g: Multigraph, filters: tuple[str, ...]) -> bool:
    if "connected" in filters and not is_connected(g):
        return False
    if "planar" in filters and not is_planar(g):
        return False
    return True


def cubic_pairing(two_n: int, rng: Rng) -> Multigraph:
    """Shuffle the ``3 * two_n`` half-edges and pair them consecutively."""
    halves = np.repeat(np.arange(1, two_n + 1, dtype=np.int64), 3)
    shuffle_inplace(rng.state, halves)
    return Multigraph.from_edges(two_n, [(int(halves[2 * i]), int(halves[2 * i + 1])) for i in range(len(halves) // 2)])


def cubic_config_sample(two_n: int, filters: Iterable[str] = (), seed: int = 0,
                        max_tries: int = DEFAULT_MAX_TRIES, trial: int = 0) -> Multigraph:
    """Pairing-model cubic multigraph, conditioned on ``filters`` by rejection.

    Each multigraph appears with probability proportional to its compensation
    factor. Rejection attempt ``a`` of trial ``t`` uses stream ``(seed, t * max_tries + a)``.
    """
    if two_n < 2 or two_n % 2:
        raise ValueError("two_n must be a positive even number")
    flt = tuple(filters)
    for f in flt:
        if f not in ("connected", "planar"):
            raise ValueError(f"unknown filter {f!r}")
    for a in range(max_tries):
        g = cubic_pairing(two_n, Rng(seed, trial * max_tries + a))
        if _passes(g, flt):
            return g
    raise SamplerExhausted(max_tries, "cubic multigraph")
