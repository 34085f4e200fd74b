from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import multigraphs
from plancore.multigraph import (Multigraph, components, degree_sequence, disjoint_union, induced, is_connected,
                                 is_simple, relabel, subdivide_edge, weight)


def test_weight_examples():
    E = Multigraph.from_edges
    assert weight(E(1, [(1, 1)])) == Fraction(1, 2)
    assert weight(E(2, [(1, 2)] * 3)) == Fraction(1, 6)
    assert weight(E(1, [(1, 1), (1, 1)])) == Fraction(1, 8)
    assert weight(E(3, [(1, 2), (2, 3), (3, 1)])) == 1


@given(multigraphs(), st.randoms(use_true_random=False))
def test_weight_invariant_under_relabelling(g, rnd):
    perm = list(range(1, g.n + 1))
    rnd.shuffle(perm)
    h = relabel(g, {i + 1: p for i, p in enumerate(perm)})
    assert weight(h) == weight(g)
    assert sorted(h.degree_sequence()) == sorted(g.degree_sequence())


@given(multigraphs())
def test_degree_sum_is_twice_edges(g):
    assert sum(degree_sequence(g)) == 2 * g.m


@given(multigraphs())
def test_text_round_trip(g):
    h = Multigraph.from_text(g.to_text())
    assert h.same_graph(g)
    assert h.to_text() == g.to_text()


@given(multigraphs())
def test_components_partition_vertices(g):
    comps = components(g)
    flat = sorted(v for c in comps for v in c)
    assert flat == list(range(1, g.n + 1))
    assert is_connected(g) == (len(comps) == 1)


@given(multigraphs(max_m=8))
def test_subdivision_keeps_weight_unless_it_splits_a_class(g):
    for eid, u, v in g.edges:
        h = subdivide_edge(g, eid)
        assert h.n == g.n + 1 and h.m == g.m + 1
        assert sum(h.degree_sequence()) == 2 * h.m
        if is_simple(g):
            assert weight(h) == 1


def test_subdivide_rejects_wrong_label_and_unknown_edge():
    g = Multigraph.from_edges(2, [(1, 2)])
    with pytest.raises(ValueError):
        subdivide_edge(g, 0, new_label=7)
    with pytest.raises(KeyError):
        subdivide_edge(g, 5)


def test_retired_ids_are_not_reused():
    g = Multigraph.from_edges(3, [(1, 2), (2, 3)])
    h = g.with_edges(3, [1], [(1, 3)])
    assert h.has_edge_id(2) and not h.has_edge_id(1)
    assert h.next_id == 3


def test_validation():
    with pytest.raises(ValueError):
        Multigraph(2, ((0, 1, 3),))
    with pytest.raises(ValueError):
        Multigraph(2, ((1, 1, 2), (0, 1, 2)))
    with pytest.raises(ValueError):
        Multigraph.from_text("2 2\n1 2\n")


def test_induced_and_union():
    g = Multigraph.from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 4)])
    h, labels = induced(g, [3, 4])
    assert labels == (3, 4)
    assert h.canonical() == (2, ((1, 2), (2, 2)))
    u = disjoint_union(g, h)
    assert u.n == 6 and u.m == 6
