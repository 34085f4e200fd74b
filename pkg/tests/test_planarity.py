from __future__ import annotations

import networkx as nx
from hypothesis import given

from conftest import multigraphs
from oracles import planar_brute
from plancore.multigraph import Multigraph
from plancore.planarity import is_planar
from plancore.rng import Rng
from plancore.sampler import gnm_sample

E = Multigraph.from_edges


def _k(n):
    return E(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def test_small_examples():
    assert is_planar(_k(4))
    assert not is_planar(_k(5))
    assert not is_planar(E(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)]))
    petersen = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
                (6, 8), (8, 10), (10, 7), (7, 9), (9, 6)]
    assert not is_planar(E(10, petersen))
    # loops and parallel edges do not affect planarity
    assert is_planar(E(2, [(1, 1), (1, 2), (1, 2), (2, 2)]))
    assert is_planar(Multigraph(0))


def test_k5_subdivision_in_larger_graph():
    pairs = [(u, v) for u in range(1, 6) for v in range(u + 1, 6) if (u, v) != (1, 2)]
    pairs += [(1, 6), (6, 2), (6, 7), (7, 8)]
    assert not is_planar(E(8, pairs))


def test_matches_kuratowski_minor_oracle_on_fixed_sample():
    rng = Rng(2024)
    checked = 0
    for _ in range(500):
        n = 5 + rng.below(3)
        m = 9 + rng.below(min(n * (n - 1) // 2 - 9, 7) + 1)
        g = gnm_sample(n, m, rng.below(2**31))
        assert is_planar(g) == planar_brute(g)
        checked += 1
    assert checked == 500


@given(multigraphs(max_n=8, max_m=20))
def test_matches_networkx(g):
    G = nx.MultiGraph()
    G.add_nodes_from(range(1, g.n + 1))
    G.add_edges_from(g.pairs())
    assert is_planar(g) == nx.check_planarity(nx.Graph(G))[0]


def test_matches_networkx_on_random_sparse_graphs():
    for i in range(2000):
        n = 10 + i % 40
        m = n + (i % 3) * n // 2
        g = gnm_sample(n, min(m, n * (n - 1) // 2), 5, i)
        G = nx.Graph(list(g.pairs()))
        G.add_nodes_from(range(1, n + 1))
        assert is_planar(g) == nx.check_planarity(G)[0], (n, m, i)


def test_euler_bound_agreement():
    # any simple graph with m > 3n - 6 must be rejected
    for i in range(10_000):
        n = 5 + i % 6
        top = n * (n - 1) // 2
        m = 3 * n - 5 + i % (top - 3 * n + 6)
        if m > top:
            continue
        assert not is_planar(gnm_sample(n, m, 9, i))
