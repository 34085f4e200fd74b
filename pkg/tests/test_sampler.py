from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from scipy.stats import chi2

from plancore.census import census
from plancore.planarity import is_planar
from plancore.sampler import SamplerExhausted, cubic_config_sample, gnm_sample, planar_rejection_sample
from plancore.multigraph import Multigraph, is_connected


def chi2_ok(observed: np.ndarray, expected: np.ndarray) -> bool:
    """Pearson statistic within mean + 3 sd of its chi-square reference."""
    stat = float(np.sum((observed - expected) ** 2 / expected))
    df = len(observed) - 1
    return stat <= df + 3 * np.sqrt(2 * df)


def test_gnm_basic():
    g = gnm_sample(10, 20, seed=1)
    assert g.m == 20 and len(set(g.pairs())) == 20
    assert list(g.pairs()) == sorted(g.pairs())
    assert all(u < v for u, v in g.pairs())
    assert gnm_sample(10, 20, 1).same_graph(g)
    assert gnm_sample(5, 0, 1).m == 0
    assert gnm_sample(5, 10, 1).m == 10
    with pytest.raises(ValueError):
        gnm_sample(4, 7, 0)


def test_gnm_uniform_small():
    trials = 40_000
    seen = Counter(gnm_sample(4, 3, 2, t).canonical()[1] for t in range(trials))
    assert len(seen) == comb(6, 3)
    obs = np.array(list(seen.values()), dtype=float)
    assert chi2_ok(obs, np.full(len(obs), trials / len(obs)))


def test_planar_rejection_is_uniform_on_planar_graphs():
    pairs = list(combinations(range(1, 6), 2))
    planar = [s for s in combinations(pairs, 5) if is_planar(Multigraph.from_edges(5, s))]
    assert len(planar) == 252
    trials = 50_000
    seen = Counter(planar_rejection_sample(5, 5, seed=t).graph.canonical()[1] for t in range(trials))
    assert set(seen) <= set(planar)
    obs = np.array([seen.get(s, 0) for s in planar], dtype=float)
    assert chi2_ok(obs, np.full(len(obs), trials / len(planar)))


def test_planar_rejection_acceptance_matches_enumeration():
    pairs = list(combinations(range(1, 7), 2))
    all_sets = list(combinations(pairs, 9))
    frac = sum(is_planar(Multigraph.from_edges(6, s)) for s in all_sets) / len(all_sets)
    tries = [planar_rejection_sample(6, 9, seed=t).tries for t in range(4000)]
    rate = len(tries) / sum(tries)
    assert abs(rate - frac) < 0.03
    for t in range(50):
        assert is_planar(planar_rejection_sample(6, 9, seed=t).graph)


def test_planar_rejection_telemetry_and_exhaustion():
    res = planar_rejection_sample(50, 25, seed=0)
    assert res.tries >= 1 and 0 < res.acceptance <= 1
    rates = [planar_rejection_sample(50, 25, seed=s).tries for s in range(200)]
    assert 200 / sum(rates) > 0.5
    with pytest.raises(SamplerExhausted) as exc:
        planar_rejection_sample(8, 25, seed=0, max_tries=5)
    assert exc.value.tries == 5


def _census_frequency_check(two_n: int, trials: int, seed: int) -> bool:
    c = census(two_n)
    probs = {r.edges: r.weight / c.total_weight for r in c.records}
    seen = Counter(tuple(sorted((min(u, v), max(u, v)) for u, v in
                                cubic_config_sample(two_n, seed=seed, trial=t).pairs())) for t in range(trials))
    assert set(seen) <= set(probs)
    keys = sorted(probs)
    obs = np.array([seen.get(k, 0) for k in keys], dtype=float)
    exp = np.array([float(probs[k]) * trials for k in keys])
    return chi2_ok(obs, exp)


@pytest.mark.parametrize("two_n", [2, 4])
def test_cubic_matches_census(two_n):
    assert _census_frequency_check(two_n, 20_000, seed=11)


def test_cubic_examples():
    c = census(2)
    triple = next(r for r in c.records if r.edges == ((1, 2), (1, 2), (1, 2)))
    assert triple.weight / c.total_weight == Fraction(2, 5)
    for t in range(50):
        g = cubic_config_sample(8, seed=3, trial=t)
        assert set(g.degree_sequence()) == {3}
    for t in range(20):
        g = cubic_config_sample(10, ["connected", "planar"], seed=3, trial=t)
        assert is_connected(g) and is_planar(g)
    with pytest.raises(ValueError):
        cubic_config_sample(3)
    with pytest.raises(ValueError):
        cubic_config_sample(4, ["bipartite"])


def test_cubic_loops_per_vertex_window():
    # the pinned window [0.1, 0.5] at two_n = 100 (unfiltered pairing model)
    loops = [cubic_config_sample(100, seed=5, trial=t).loop_count() for t in range(1000)]
    per_vertex = np.mean(loops) / 100
    assert 0.1 <= per_vertex <= 0.5, f"loops per vertex {per_vertex:.4f}"


def test_cubic_loop_rate_matches_pairing_mean():
    # expected loops = two_n * 3 / (3 two_n - 1)
    loops = np.array([cubic_config_sample(100, seed=6, trial=t).loop_count() for t in range(4000)])
    mean = 100 * 3 / 299
    assert abs(loops.mean() - mean) < 3 * loops.std() / np.sqrt(len(loops))
