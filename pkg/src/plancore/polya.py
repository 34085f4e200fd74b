"""Polya urns with N singleton colours and with two colours.

Samplers run the sequential draw-and-reinforce scheme on a ball array: drawing
a uniform ball from ``N + t`` balls picks colour ``i`` with probability
``(1 + X_i) / (N + t)``. The same kernel drives random core construction in
:mod:`plancore.corelab`, so both processes share one code path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable

import mpmath
import numpy as np
from numba import njit

from .rng import Rng, below, seed_state

_PREC = 60  # decimal digits for bound evaluation


@dataclass(frozen=True)
class UrnOutcome:
    N: int
    k: int
    counts: tuple[int, ...]


@dataclass(frozen=True)
class TwoColourOutcome:
    b: int
    w: int
    k: int
    X: int


@njit(cache=True)
def _urn_counts(state, colours, k):
    """Run ``k`` draws on a ball array seeded with ``colours`` (one ball per colour slot)."""
    n0 = colours.shape[0]
    balls = np.empty(n0 + k, dtype=np.int32)
    balls[:n0] = colours
    ncol = 0
    for i in range(n0):
        if colours[i] + 1 > ncol:
            ncol = colours[i] + 1
    counts = np.zeros(ncol, dtype=np.int64)
    for t in range(k):
        c = balls[below(state, n0 + t)]
        balls[n0 + t] = c
        counts[c] += 1
    return counts


@njit(cache=True)
def _urn_minmax_batch(states, N, k, f):
    trials = states.shape[0]
    mins = np.empty(trials, dtype=np.int64)
    maxs = np.empty(trials, dtype=np.int64)
    colours = np.arange(N)
    for t in range(trials):
        counts = _urn_counts(states[t], colours, k)
        lo = counts[0]
        hi = counts[0]
        for i in range(1, f):
            if counts[i] < lo:
                lo = counts[i]
            if counts[i] > hi:
                hi = counts[i]
        mins[t] = lo
        maxs[t] = hi
    return mins, maxs


@njit(cache=True)
def _urn_counts_batch(states, colours, k, ncol):
    trials = states.shape[0]
    out = np.empty((trials, ncol), dtype=np.int64)
    for t in range(trials):
        out[t, :] = _urn_counts(states[t], colours, k)
    return out


def trial_states(seed: int, trials: int, offset: int = 0) -> np.ndarray:
    """Stacked generator states for trials ``offset .. offset+trials-1``."""
    out = np.empty((trials, 4), dtype=np.uint64)
    for t in range(trials):
        out[t] = seed_state(seed, offset + t)
    return out


def urn_sample(N: int, k: int, seed: int, trial: int = 0) -> UrnOutcome:
    if N < 1 or k < 0:
        raise ValueError("need N >= 1 and k >= 0")
    rng = Rng(seed, trial)
    counts = _urn_counts(rng.state, np.arange(N, dtype=np.int64), k)
    return UrnOutcome(N, k, tuple(int(c) for c in counts))


def urn_counts(N: int, k: int, trials: int, seed: int) -> np.ndarray:
    """Count vectors for ``trials`` independent urns; row ``t`` equals ``urn_sample(N, k, seed, t)``."""
    if N < 1 or k < 0:
        raise ValueError("need N >= 1 and k >= 0")
    return _urn_counts_batch(trial_states(seed, trials), np.arange(N, dtype=np.int64), k, N)


def weighted_urn_counts(initial: Iterable[int], k: int, trials: int, seed: int) -> np.ndarray:
    """Urn whose colour ``i`` starts with ``initial[i]`` balls; returns drawn counts per colour."""
    init = list(initial)
    if any(b < 1 for b in init):
        raise ValueError("every colour needs at least one ball")
    colours = np.repeat(np.arange(len(init), dtype=np.int64), init)
    return _urn_counts_batch(trial_states(seed, trials), colours, k, len(init))


def two_colour_sample(b: int, w: int, k: int, seed: int, trial: int = 0) -> TwoColourOutcome:
    if b < 1 or w < 1:
        raise ValueError("need b, w >= 1")
    rng = Rng(seed, trial)
    colours = np.array([0] * b + [1] * w, dtype=np.int64)
    counts = _urn_counts(rng.state, colours, k)
    return TwoColourOutcome(b, w, k, int(counts[0]))


def two_colour_draws(b: int, w: int, k: int, trials: int, seed: int) -> np.ndarray:
    """Black-draw counts for ``trials`` independent two-colour urns."""
    return weighted_urn_counts([b, w], k, trials, seed)[:, 0]


# exact distributions ---------------------------------------------------------


def urn_pmf(N: int, k: int, x: int) -> Fraction:
    """P(X_i = x) for a singleton-initialised urn with N colours after k draws."""
    if N < 2:
        raise ValueError("marginal formula needs N >= 2")
    if not 0 <= x <= k:
        raise ValueError(f"x={x} outside 0..{k}")
    return Fraction(comb(k + N - x - 2, N - 2), comb(k + N - 1, N - 1))


def urn_pmf_vector(N: int, k: int) -> list[Fraction]:
    return [urn_pmf(N, k, x) for x in range(k + 1)]


@lru_cache(maxsize=None)
def urn_joint_exact(N: int, k: int) -> dict[tuple[int, ...], Fraction]:
    """Exact law of the count vector by expanding the outcome tree level by level.

    Paths reaching the same count vector are merged, so the cost is the number
    of weak compositions rather than the number of draw sequences.
    """
    level: dict[tuple[int, ...], Fraction] = {tuple([0] * N): Fraction(1)}
    for t in range(k):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for vec, p in level.items():
            for i in range(N):
                q = p * Fraction(1 + vec[i], N + t)
                new = vec[:i] + (vec[i] + 1,) + vec[i + 1 :]
                nxt[new] = nxt.get(new, Fraction(0)) + q
        level = nxt
    return level


def two_colour_exact(b: int, w: int, k: int) -> dict[int, Fraction]:
    """Exact law of the black-draw count from the full outcome tree."""
    level = {0: Fraction(1)}
    for t in range(k):
        nxt: dict[int, Fraction] = {}
        total = b + w + t
        for x, p in level.items():
            pb = Fraction(b + x, total)
            nxt[x + 1] = nxt.get(x + 1, Fraction(0)) + p * pb
            nxt[x] = nxt.get(x, Fraction(0)) + p * (1 - pb)
        level = nxt
    return level


def two_colour_moments(b: int, w: int, k: int) -> tuple[Fraction, Fraction]:
    """Closed-form mean and variance of the black-draw count."""
    if b < 1 or w < 1:
        raise ValueError("need b, w >= 1")
    s = b + w
    mean = Fraction(b * k, s)
    var = Fraction(b * w * k * (s + k), s * s * (s + 1))
    return mean, var


# order statistics ----------------------------------------------------------------


@dataclass(frozen=True)
class MinMaxSummary:
    N: int
    k: int
    f: int
    mins: np.ndarray
    maxs: np.ndarray

    def quantiles(self, qs: Iterable[float] = (0.1, 0.25, 0.5, 0.75, 0.9)) -> dict[str, dict[str, float]]:
        qs = list(qs)
        return {
            "min": {str(q): float(np.quantile(self.mins, q)) for q in qs},
            "max": {str(q): float(np.quantile(self.maxs, q)) for q in qs},
        }

    @property
    def median_min(self) -> float:
        return float(np.median(self.mins))

    @property
    def median_max(self) -> float:
        return float(np.median(self.maxs))


def urn_minmax(N: int, k: int, f: int, trials: int, seed: int) -> MinMaxSummary:
    """Per-trial minimum and maximum of the first ``f`` colour counts."""
    if not 1 <= f <= N:
        raise ValueError("need 1 <= f <= N")
    mins, maxs = _urn_minmax_batch(trial_states(seed, trials), N, k, f)
    return MinMaxSummary(N, k, f, mins, maxs)


# tail bounds -----------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """One upper bound on a tail probability, evaluated to high precision."""

    name: str
    tail: str  # "le" for P(X <= x), "ge" for P(X >= x)
    value: Fraction | mpmath.mpf
    applicable: bool

    def holds(self, exact: Fraction) -> bool:
        """True when ``exact`` does not exceed the bound (vacuously true if not applicable)."""
        if not self.applicable:
            return True
        if isinstance(self.value, Fraction):
            return exact <= self.value
        with mpmath.workdps(_PREC):
            return mpmath.mpf(exact.numerator) / exact.denominator <= self.value


@dataclass(frozen=True)
class TailBounds:
    N: int
    k: int
    x: int
    bounds: tuple[Bound, ...]

    def by_name(self, name: str) -> Bound:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)


def urn_tail_bounds(N: int, k: int, x: int) -> TailBounds:
    """The four marginal tail bounds with their side conditions.

    * ``lower_linear``: P(X <= x) <= (x+1) N / (k+N)
    * ``upper_exp``: P(X >= x) <= 2 exp(-(N-2) x / (k+N))
    * ``upper_refined``: P(X >= x) <= 1 - (N-1)/(k+N) * x * exp(-2 N x / k), needs x <= k/2
    * ``lower_doubly_exp``: P(X <= x) <= exp(-exp(-2 N x / k) / 64), needs x <= k/2 and k >= 8N
    """
    half = 2 * x <= k
    with mpmath.workdps(_PREC):
        lin = Fraction((x + 1) * N, k + N)
        up = 2 * mpmath.exp(-mpmath.mpf(N - 2) * x / (k + N))
        if k > 0:
            decay = mpmath.exp(-mpmath.mpf(2 * N) * x / k)
        else:
            decay = mpmath.mpf(1)  # only x = 0 is admissible, where the factor multiplies 0
        refined = 1 - mpmath.mpf(N - 1) / (k + N) * x * decay
        dbl = mpmath.exp(-decay / 64)
    return TailBounds(N, k, x, (
        Bound("lower_linear", "le", lin, True),
        Bound("upper_exp", "ge", up, True),
        Bound("upper_refined", "ge", refined, half),
        Bound("lower_doubly_exp", "le", dbl, half and k >= 8 * N),
    ))


def exact_tails(N: int, k: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exact ``P(X <= x)`` and ``P(X >= x)`` for ``x = 0..k``."""
    pmf = urn_pmf_vector(N, k)
    le, acc = [], Fraction(0)
    for p in pmf:
        acc += p
        le.append(acc)
    ge, acc = [Fraction(0)] * (k + 1), Fraction(0)
    for x in range(k, -1, -1):
        acc += pmf[x]
        ge[x] = acc
    return le, ge


def low_count_mass(N: int, k: int) -> Fraction:
    """Sum over colours of P(X_i <= 1), exact."""
    p = urn_pmf(N, k, 0) + (urn_pmf(N, k, 1) if k >= 1 else 0)
    return N * p


def low_count_bound(N: int, k: int) -> Fraction:
    """Aggregate bound 2 N^2 / k on :func:`low_count_mass` (k >= 1)."""
    if k < 1:
        raise ValueError("bound needs k >= 1")
    return Fraction(2 * N * N, k)


def negative_dependence_gaps(N: int, k: int) -> dict[tuple[int, int], Fraction]:
    """``P(X1>=a)P(X2>=b) - P(X1>=a, X2>=b)`` for every ``a, b`` in ``0..k``, exact.

    Negative dependence of the first two counts means every gap is non-negative.
    """
    if N < 2:
        raise ValueError("need at least two colours")
    joint = urn_joint_exact(N, k)
    _, ge = exact_tails(N, k)
    gaps = {}
    for a in range(k + 1):
        for b in range(k + 1):
            both = sum((p for c, p in joint.items() if c[0] >= a and c[1] >= b), Fraction(0))
            gaps[(a, b)] = ge[a] * ge[b] - both
    return gaps
